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

#include <initializer_list>
#include <utility>
#include <vector>

#include "relens/value.hpp"

namespace relens {

using AttrSet = std::vector<std::string>; // sorted, unique

/// Sorted-unique attribute set helpers.
AttrSet attrs_of(std::initializer_list<std::string> names);
AttrSet attrs_sorted(std::vector<std::string> names);
AttrSet attrs_union(const AttrSet& a, const AttrSet& b);
AttrSet attrs_intersect(const AttrSet& a, const AttrSet& b);
AttrSet attrs_minus(const AttrSet& a, const AttrSet& b);
bool attrs_subset(const AttrSet& a, const AttrSet& b);
bool attrs_contains(const AttrSet& a, const std::string& name);
AttrSet attrs_rename(const AttrSet& a, const std::string& from, const std::string& to);

/// A record: a finite mapping from attribute names to values, kept sorted
/// by name. Attribute names are non-empty.
class Record {
public:
    Record() = default;
    Record(std::initializer_list<std::pair<std::string, Value>> fields);
    static Record from_fields(std::vector<std::pair<std::string, Value>> fields);

    bool has(const std::string& attr) const;
    const Value& get(const std::string& attr) const; // throws MissingAttribute

    AttrSet domain() const;
    size_t size() const { return fields_.size(); }

    /// Restriction to `attrs` (ignores names not present): m|V.
    Record project(const AttrSet& attrs) const;
    /// Domain antirestriction: drop the named attributes.
    Record antirestrict(const AttrSet& attrs) const;
    /// Record update: fields of `other` win.
    Record update(const Record& other) const;
    Record rename(const std::string& from, const std::string& to) const;

    const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

    bool operator==(const Record& other) const { return fields_ == other.fields_; }
    std::string to_string() const;

private:
    std::vector<std::pair<std::string, Value>> fields_; // sorted by name
};

} // namespace relens
