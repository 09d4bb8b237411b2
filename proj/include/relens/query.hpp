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

struct QueryExpr;
using QueryPtr = std::shared_ptr<const QueryExpr>;

/// Relational query expressions with let-bindings.
struct QueryExpr {
    enum class Tag { Const, Var, Select, Project, Join, Rename, Union, Difference, Let };

    Tag tag = Tag::Const;
    Relation rel;              // Const
    std::string name;          // Var / Let binder
    PredPtr pred;              // Select
    AttrSet attrs;             // Project
    std::string attr, attr2;   // Rename from/to
    QueryPtr a, b;             // children; Let: a = bound, b = body
};

QueryPtr q_const(Relation m);
QueryPtr q_var(std::string name);
QueryPtr q_select(PredPtr p, QueryPtr q);
QueryPtr q_project(QueryPtr q, AttrSet attrs);
QueryPtr q_join(QueryPtr a, QueryPtr b);
QueryPtr q_rename(QueryPtr q, std::string from, std::string to);
QueryPtr q_union(QueryPtr a, QueryPtr b);
QueryPtr q_difference(QueryPtr a, QueryPtr b);
QueryPtr q_let(std::string name, QueryPtr bound, QueryPtr body);

using Env = std::map<std::string, Relation>;

Relation query_eval(const QueryPtr& q, const Env& env);

/// Per-variable base relation plus a delta that must be minimal for it.
struct DeltaEnvEntry {
    Relation rel;
    DeltaRelation delta;
};
using DeltaEnv = std::map<std::string, DeltaEnvEntry>;

struct DevalOptions {
    /// When a Difference node fails the incremental side conditions, fall
    /// back to the reference derivative instead of failing.
    bool strict_incremental = false;
};

/// Compositional incrementalization: evaluates the query on the base
/// environment and produces a delta-correct, minimal delta for the result.
std::pair<Relation, DeltaRelation> query_deval(const QueryPtr& q, const DeltaEnv& env,
                                               const DevalOptions& opts = {});

} // namespace relens
