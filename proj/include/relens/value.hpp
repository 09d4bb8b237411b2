/*
 * Copyright 2026 The relens Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "relens/error.hpp"

namespace relens {

enum class Kind { Int, Str, Bool };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

/// A scalar attribute value: 64-bit integer, UTF-8 string, or boolean.
///
/// Two orderings exist. `compare` is the domain ordering used by predicates
/// (ints by value, strings by code point, false < true) and rejects
/// cross-kind comparison. `canonical_compare` additionally orders kinds by
/// tag so relations can be kept in a deterministic sorted form.
class Value {
public:
    Value() : v_(int64_t{0}) {}

    static Value of_int(int64_t i) { return Value(Repr(i)); }
    static Value of_str(std::string s) { return Value(Repr(std::move(s))); }
    static Value of_bool(bool b) { return Value(Repr(b)); }

    Kind kind() const { return static_cast<Kind>(v_.index()); }

    int64_t as_int() const;
    const std::string& as_str() const;
    bool as_bool() const;

    /// Domain comparison; throws TypeMismatch across kinds.
    int compare(const Value& other) const;

    /// Total ordering (kind tag first); never throws.
    int canonical_compare(const Value& other) const;

    bool operator==(const Value& other) const { return v_ == other.v_; }
    bool operator!=(const Value& other) const { return v_ != other.v_; }
    bool operator<(const Value& other) const { return canonical_compare(other) < 0; }

    /// Literal form used by CSV files ("1", "abc", "true").
    std::string to_literal() const;
    static Value parse(Kind k, const std::string& text);

    size_t hash() const;

private:
    using Repr = std::variant<int64_t, std::string, bool>;
    explicit Value(Repr r) : v_(std::move(r)) {}
    Repr v_;
};

struct ValueHash {
    size_t operator()(const Value& v) const { return v.hash(); }
};

} // namespace relens
