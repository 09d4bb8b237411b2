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
#include "relens/schema.hpp"

namespace relens {

Kind RelationType::kind_of(const std::string& attr) const {
    auto it = types.find(attr);
    if (it == types.end()) fail(Err::MissingAttribute, "no declared type for '" + attr + "'");
    return it->second;
}

void check_conforms(const Relation& m, const RelationType& rt, const std::string& what) {
    if (m.domain() != rt.attrs)
        fail(Err::SchemaViolation, what + ": domain mismatch");
    for (const auto& r : m.rows()) {
        if (!pred_eval(rt.pred, m.domain(), r)) {
            std::vector<std::pair<std::string, Value>> fields;
            for (size_t i = 0; i < m.domain().size(); ++i) fields.emplace_back(m.domain()[i], r[i]);
            fail(Err::SchemaViolation,
                 what + ": row " + Record::from_fields(std::move(fields)).to_string() +
                     " violates the row predicate");
        }
    }
    for (const auto& dep : rt.fds.deps())
        if (!fd_satisfies(m, dep))
            fail(Err::SchemaViolation, what + ": dependency " + dep.to_string() + " violated");
    if (!rt.keys.empty()) {
        FunDep key_dep{rt.keys, attrs_minus(rt.attrs, rt.keys)};
        if (!key_dep.rhs.empty() && !fd_satisfies(m, key_dep))
            fail(Err::SchemaViolation, what + ": key uniqueness violated");
    }
    if (!rt.types.empty()) {
        for (const auto& r : m.rows())
            for (size_t i = 0; i < m.domain().size(); ++i)
                if (r[i].kind() != rt.kind_of(m.domain()[i]))
                    fail(Err::SchemaViolation,
                         what + ": column " + m.domain()[i] + " has a value of the wrong type");
    }
}

bool conforms(const Relation& m, const RelationType& rt) {
    try {
        check_conforms(m, rt, "relation");
        return true;
    } catch (const Error&) {
        return false;
    }
}

SchemaType SchemaType::leaf(RelationType rt, std::string table) {
    SchemaType t;
    t.rel_ = std::make_shared<RelationType>(std::move(rt));
    t.table_ = std::move(table);
    return t;
}

SchemaType SchemaType::node(SchemaType left, SchemaType right) {
    SchemaType t;
    t.left_ = std::make_shared<SchemaType>(std::move(left));
    t.right_ = std::make_shared<SchemaType>(std::move(right));
    return t;
}

const RelationType& SchemaType::rel() const {
    if (!rel_) fail(Err::Internal, "schema type is not a leaf");
    return *rel_;
}

const SchemaType& SchemaType::left() const {
    if (!left_) fail(Err::Internal, "schema type is not a node");
    return *left_;
}

const SchemaType& SchemaType::right() const {
    if (!right_) fail(Err::Internal, "schema type is not a node");
    return *right_;
}

std::vector<std::string> SchemaType::tables() const {
    std::vector<std::string> out;
    if (is_leaf()) {
        if (!table_.empty()) out.push_back(table_);
        return out;
    }
    for (const auto& t : left().tables()) out.push_back(t);
    for (const auto& t : right().tables()) out.push_back(t);
    return out;
}

SchemaValue SchemaValue::leaf(Relation r) {
    SchemaValue v;
    v.rel_ = std::make_shared<Relation>(std::move(r));
    return v;
}

SchemaValue SchemaValue::node(SchemaValue left, SchemaValue right) {
    SchemaValue v;
    v.left_ = std::make_shared<SchemaValue>(std::move(left));
    v.right_ = std::make_shared<SchemaValue>(std::move(right));
    return v;
}

const Relation& SchemaValue::rel() const {
    if (!rel_) fail(Err::Internal, "schema value is not a leaf");
    return *rel_;
}

const SchemaValue& SchemaValue::left() const {
    if (!left_) fail(Err::Internal, "schema value is not a node");
    return *left_;
}

const SchemaValue& SchemaValue::right() const {
    if (!right_) fail(Err::Internal, "schema value is not a node");
    return *right_;
}

bool SchemaValue::operator==(const SchemaValue& other) const {
    if (is_leaf() != other.is_leaf()) return false;
    if (is_leaf()) return rel() == other.rel();
    return left() == other.left() && right() == other.right();
}

SchemaDelta SchemaDelta::leaf(DeltaRelation d) {
    SchemaDelta v;
    v.delta_ = std::make_shared<DeltaRelation>(std::move(d));
    return v;
}

SchemaDelta SchemaDelta::node(SchemaDelta left, SchemaDelta right) {
    SchemaDelta v;
    v.left_ = std::make_shared<SchemaDelta>(std::move(left));
    v.right_ = std::make_shared<SchemaDelta>(std::move(right));
    return v;
}

const DeltaRelation& SchemaDelta::delta() const {
    if (!delta_) fail(Err::Internal, "schema delta is not a leaf");
    return *delta_;
}

const SchemaDelta& SchemaDelta::left() const {
    if (!left_) fail(Err::Internal, "schema delta is not a node");
    return *left_;
}

const SchemaDelta& SchemaDelta::right() const {
    if (!right_) fail(Err::Internal, "schema delta is not a node");
    return *right_;
}

bool SchemaDelta::is_empty() const {
    if (is_leaf()) return delta().is_empty();
    return left().is_empty() && right().is_empty();
}

bool SchemaDelta::operator==(const SchemaDelta& other) const {
    if (is_leaf() != other.is_leaf()) return false;
    if (is_leaf()) return delta() == other.delta();
    return left() == other.left() && right() == other.right();
}

SchemaValue schema_apply(const SchemaValue& v, const SchemaDelta& d) {
    if (v.is_leaf() != d.is_leaf()) fail(Err::Internal, "schema value/delta shape mismatch");
    if (v.is_leaf()) return SchemaValue::leaf(delta_apply(v.rel(), d.delta()));
    return SchemaValue::node(schema_apply(v.left(), d.left()), schema_apply(v.right(), d.right()));
}

SchemaDelta schema_diff(const SchemaValue& new_v, const SchemaValue& old_v) {
    if (new_v.is_leaf() != old_v.is_leaf()) fail(Err::Internal, "schema value shape mismatch");
    if (new_v.is_leaf()) return SchemaDelta::leaf(rel_diff(new_v.rel(), old_v.rel()));
    return SchemaDelta::node(schema_diff(new_v.left(), old_v.left()),
                             schema_diff(new_v.right(), old_v.right()));
}

SchemaDelta schema_empty_delta(const SchemaValue& shape) {
    if (shape.is_leaf()) return SchemaDelta::leaf(DeltaRelation::empty(shape.rel().domain()));
    return SchemaDelta::node(schema_empty_delta(shape.left()), schema_empty_delta(shape.right()));
}

bool schema_delta_minimal(const SchemaDelta& d, const SchemaValue& v) {
    if (v.is_leaf() != d.is_leaf()) fail(Err::Internal, "schema value/delta shape mismatch");
    if (v.is_leaf()) return delta_minimal(d.delta(), v.rel());
    return schema_delta_minimal(d.left(), v.left()) && schema_delta_minimal(d.right(), v.right());
}

void check_schema_conforms(const SchemaValue& v, const SchemaType& t, const std::string& what) {
    if (v.is_leaf() != t.is_leaf()) fail(Err::SchemaViolation, what + ": shape mismatch");
    if (v.is_leaf()) {
        check_conforms(v.rel(), t.rel(), what);
        return;
    }
    check_schema_conforms(v.left(), t.left(), what);
    check_schema_conforms(v.right(), t.right(), what);
}

} // namespace relens
