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

#include "relens/schema.hpp"

namespace relens {

enum class StmtKind { Select, Insert, Update, Delete };

/// One statement in the canonical dialect: uppercase keywords, sorted
/// column order, comma-separated SET clauses, single-quoted strings with
/// doubled escapes, semicolon terminator.
struct SqlStatement {
    StmtKind kind = StmtKind::Select;
    std::string text;

    bool operator==(const SqlStatement& other) const = default;
};

std::string sql_literal(const Value& v);

/// Canonical WHERE-clause text for the renderable predicate subset
/// (boolean connectives, constant/attribute comparisons, tuple
/// membership). Throws Unrenderable for the structural constructors.
std::string sql_where(const PredPtr& p);

/// DML for a delta keyed by the table keys: a deletion and an insertion
/// sharing key values pair into one UPDATE of the non-key columns;
/// leftovers become DELETEs and INSERTs. Statement order is DELETE,
/// UPDATE, INSERT, each sorted by key.
std::vector<SqlStatement> sql_dml(const std::string& table, const AttrSet& keys,
                                  const DeltaRelation& d);

/// Full-rewrite strategy: one DELETE of everything, then one INSERT per
/// row of the new contents.
std::vector<SqlStatement> sql_naive_dml(const std::string& table, const Relation& new_contents);

std::string sql_script(const std::vector<SqlStatement>& statements);

} // namespace relens
