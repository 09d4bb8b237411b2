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
#include "relens/value.hpp"

namespace relens {

const char* err_name(Err e) {
    switch (e) {
    case Err::MissingAttribute: return "MissingAttribute";
    case Err::TypeMismatch: return "TypeMismatch";
    case Err::Unevaluable: return "Unevaluable";
    case Err::DomainMismatch: return "DomainMismatch";
    case Err::BadRename: return "BadRename";
    case Err::UnboundVariable: return "UnboundVariable";
    case Err::NotTreeForm: return "NotTreeForm";
    case Err::FDViolation: return "FDViolation";
    case Err::Overlap: return "Overlap";
    case Err::NotMinimal: return "NotMinimal";
    case Err::PreconditionViolated: return "PreconditionViolated";
    case Err::TypeError: return "TypeError";
    case Err::SchemaViolation: return "SchemaViolation";
    case Err::UnsupportedVariant: return "UnsupportedVariant";
    case Err::UnknownTable: return "UnknownTable";
    case Err::KeyCollision: return "KeyCollision";
    case Err::Unrenderable: return "Unrenderable";
    case Err::ParseError: return "ParseError";
    case Err::Internal: return "Internal";
    }
    return "Unknown";
}

const char* kind_name(Kind k) {
    switch (k) {
    case Kind::Int: return "int";
    case Kind::Str: return "str";
    case Kind::Bool: return "bool";
    }
    return "?";
}

Kind kind_from_name(const std::string& name) {
    if (name == "int") return Kind::Int;
    if (name == "str") return Kind::Str;
    if (name == "bool") return Kind::Bool;
    fail(Err::ParseError, "unknown type name '" + name + "'");
}

int64_t Value::as_int() const {
    if (kind() != Kind::Int) fail(Err::TypeMismatch, "value is not an int");
    return std::get<int64_t>(v_);
}

const std::string& Value::as_str() const {
    if (kind() != Kind::Str) fail(Err::TypeMismatch, "value is not a string");
    return std::get<std::string>(v_);
}

bool Value::as_bool() const {
    if (kind() != Kind::Bool) fail(Err::TypeMismatch, "value is not a bool");
    return std::get<bool>(v_);
}

namespace {
template <typename T>
int cmp3(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}
} // namespace

int Value::compare(const Value& other) const {
    if (kind() != other.kind())
        fail(Err::TypeMismatch, std::string("cannot compare ") + kind_name(kind()) + " with " +
                                    kind_name(other.kind()));
    switch (kind()) {
    case Kind::Int: return cmp3(std::get<int64_t>(v_), std::get<int64_t>(other.v_));
    case Kind::Str: return cmp3(std::get<std::string>(v_), std::get<std::string>(other.v_));
    case Kind::Bool: return cmp3(std::get<bool>(v_), std::get<bool>(other.v_));
    }
    return 0;
}

int Value::canonical_compare(const Value& other) const {
    if (v_.index() != other.v_.index()) return v_.index() < other.v_.index() ? -1 : 1;
    return compare(other);
}

std::string Value::to_literal() const {
    switch (kind()) {
    case Kind::Int: return std::to_string(std::get<int64_t>(v_));
    case Kind::Str: return std::get<std::string>(v_);
    case Kind::Bool: return std::get<bool>(v_) ? "true" : "false";
    }
    return "";
}

Value Value::parse(Kind k, const std::string& text) {
    switch (k) {
    case Kind::Int: {
        try {
            size_t pos = 0;
            int64_t v = std::stoll(text, &pos);
            if (pos != text.size()) fail(Err::ParseError, "trailing characters in int '" + text + "'");
            return of_int(v);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(Err::ParseError, "bad int literal '" + text + "'");
        }
    }
    case Kind::Str: return of_str(text);
    case Kind::Bool:
        if (text == "true") return of_bool(true);
        if (text == "false") return of_bool(false);
        fail(Err::ParseError, "bad bool literal '" + text + "'");
    }
    fail(Err::Internal, "bad kind");
}

size_t Value::hash() const {
    size_t h = v_.index();
    size_t hv = 0;
    switch (kind()) {
    case Kind::Int: hv = std::hash<int64_t>{}(std::get<int64_t>(v_)); break;
    case Kind::Str: hv = std::hash<std::string>{}(std::get<std::string>(v_)); break;
    case Kind::Bool: hv = std::hash<bool>{}(std::get<bool>(v_)); break;
    }
    return h * 0x9e3779b97f4a7c15ULL + hv;
}

} // namespace relens
