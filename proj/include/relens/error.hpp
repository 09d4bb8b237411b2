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

#include <stdexcept>
#include <string>

namespace relens {

/// Error categories surfaced by the engine. Most map onto a specific
/// contract violation; the CLI maps them to exit codes.
enum class Err {
    MissingAttribute,
    TypeMismatch,
    Unevaluable,
    DomainMismatch,
    BadRename,
    UnboundVariable,
    NotTreeForm,
    FDViolation,
    Overlap,
    NotMinimal,
    PreconditionViolated,
    TypeError,
    SchemaViolation,
    UnsupportedVariant,
    UnknownTable,
    KeyCollision,
    Unrenderable,
    ParseError,
    Internal,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& msg)
        : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}

    Err kind() const { return kind_; }

private:
    Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

} // namespace relens
