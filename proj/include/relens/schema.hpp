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

#include <map>

#include "relens/delta.hpp"

namespace relens {

/// The type of one relation: attribute set, column kinds, a row predicate,
/// functional dependencies in tree form, and the key columns used for SQL
/// generation.
struct RelationType {
    AttrSet attrs;
    std::map<std::string, Kind> types;
    PredPtr pred = pred_true();
    FunDepSet fds;
    AttrSet keys;

    Kind kind_of(const std::string& attr) const;
    /// Key columns; when none are declared every column is the key.
    AttrSet effective_keys() const { return keys.empty() ? attrs : keys; }
};

/// Throws SchemaViolation naming the failing constraint and a witness row.
void check_conforms(const Relation& m, const RelationType& rt, const std::string& what);
bool conforms(const Relation& m, const RelationType& rt);

/// Database schemas are tensor trees of relation types; base-table leaves
/// carry the table name.
class SchemaType {
public:
    static SchemaType leaf(RelationType rt, std::string table = "");
    static SchemaType node(SchemaType left, SchemaType right);

    bool is_leaf() const { return rel_ != nullptr; }
    const RelationType& rel() const;
    const std::string& table() const { return table_; }
    const SchemaType& left() const;
    const SchemaType& right() const;

    std::vector<std::string> tables() const; // leaf table names, in-order

private:
    std::shared_ptr<RelationType> rel_;
    std::string table_;
    std::shared_ptr<SchemaType> left_, right_;
};

/// Values and deltas shaped like a schema tree.
class SchemaValue {
public:
    static SchemaValue leaf(Relation r);
    static SchemaValue node(SchemaValue left, SchemaValue right);

    bool is_leaf() const { return rel_ != nullptr; }
    const Relation& rel() const;
    const SchemaValue& left() const;
    const SchemaValue& right() const;

    bool operator==(const SchemaValue& other) const;

private:
    std::shared_ptr<Relation> rel_;
    std::shared_ptr<SchemaValue> left_, right_;
};

class SchemaDelta {
public:
    static SchemaDelta leaf(DeltaRelation d);
    static SchemaDelta node(SchemaDelta left, SchemaDelta right);

    bool is_leaf() const { return delta_ != nullptr; }
    const DeltaRelation& delta() const;
    const SchemaDelta& left() const;
    const SchemaDelta& right() const;

    bool is_empty() const;
    bool operator==(const SchemaDelta& other) const;

private:
    std::shared_ptr<DeltaRelation> delta_;
    std::shared_ptr<SchemaDelta> left_, right_;
};

/// Componentwise delta application / diffing over schema trees.
SchemaValue schema_apply(const SchemaValue& v, const SchemaDelta& d);
SchemaDelta schema_diff(const SchemaValue& new_v, const SchemaValue& old_v);
SchemaDelta schema_empty_delta(const SchemaValue& shape);
bool schema_delta_minimal(const SchemaDelta& d, const SchemaValue& v);
void check_schema_conforms(const SchemaValue& v, const SchemaType& t, const std::string& what);

} // namespace relens
