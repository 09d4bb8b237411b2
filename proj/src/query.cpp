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
#include "relens/query.hpp"

#include <cstdio>

namespace relens {

namespace {
std::shared_ptr<QueryExpr> make(QueryExpr::Tag tag) {
    auto q = std::make_shared<QueryExpr>();
    q->tag = tag;
    return q;
}
} // namespace

QueryPtr q_const(Relation m) {
    auto q = make(QueryExpr::Tag::Const);
    q->rel = std::move(m);
    return q;
}

QueryPtr q_var(std::string name) {
    auto q = make(QueryExpr::Tag::Var);
    q->name = std::move(name);
    return q;
}

QueryPtr q_select(PredPtr p, QueryPtr sub) {
    auto q = make(QueryExpr::Tag::Select);
    q->pred = std::move(p);
    q->a = std::move(sub);
    return q;
}

QueryPtr q_project(QueryPtr sub, AttrSet attrs) {
    auto q = make(QueryExpr::Tag::Project);
    q->a = std::move(sub);
    q->attrs = std::move(attrs);
    return q;
}

QueryPtr q_join(QueryPtr a, QueryPtr b) {
    auto q = make(QueryExpr::Tag::Join);
    q->a = std::move(a);
    q->b = std::move(b);
    return q;
}

QueryPtr q_rename(QueryPtr sub, std::string from, std::string to) {
    auto q = make(QueryExpr::Tag::Rename);
    q->a = std::move(sub);
    q->attr = std::move(from);
    q->attr2 = std::move(to);
    return q;
}

QueryPtr q_union(QueryPtr a, QueryPtr b) {
    auto q = make(QueryExpr::Tag::Union);
    q->a = std::move(a);
    q->b = std::move(b);
    return q;
}

QueryPtr q_difference(QueryPtr a, QueryPtr b) {
    auto q = make(QueryExpr::Tag::Difference);
    q->a = std::move(a);
    q->b = std::move(b);
    return q;
}

QueryPtr q_let(std::string name, QueryPtr bound, QueryPtr body) {
    auto q = make(QueryExpr::Tag::Let);
    q->name = std::move(name);
    q->a = std::move(bound);
    q->b = std::move(body);
    return q;
}

Relation query_eval(const QueryPtr& q, const Env& env) {
    switch (q->tag) {
    case QueryExpr::Tag::Const: return q->rel;
    case QueryExpr::Tag::Var: {
        auto it = env.find(q->name);
        if (it == env.end()) fail(Err::UnboundVariable, "unbound relation variable " + q->name);
        return it->second;
    }
    case QueryExpr::Tag::Select: return rel_select(q->pred, query_eval(q->a, env));
    case QueryExpr::Tag::Project: return rel_project(query_eval(q->a, env), q->attrs);
    case QueryExpr::Tag::Join: return rel_join(query_eval(q->a, env), query_eval(q->b, env));
    case QueryExpr::Tag::Rename: return rel_rename(query_eval(q->a, env), q->attr, q->attr2);
    case QueryExpr::Tag::Union: return rel_union(query_eval(q->a, env), query_eval(q->b, env));
    case QueryExpr::Tag::Difference:
        return rel_difference(query_eval(q->a, env), query_eval(q->b, env));
    case QueryExpr::Tag::Let: {
        Env inner = env;
        inner[q->name] = query_eval(q->a, env);
        return query_eval(q->b, inner);
    }
    }
    fail(Err::Internal, "bad query tag");
}

std::pair<Relation, DeltaRelation> query_deval(const QueryPtr& q, const DeltaEnv& env,
                                               const DevalOptions& opts) {
    switch (q->tag) {
    case QueryExpr::Tag::Const: return {q->rel, DeltaRelation::empty(q->rel.domain())};
    case QueryExpr::Tag::Var: {
        auto it = env.find(q->name);
        if (it == env.end()) fail(Err::UnboundVariable, "unbound relation variable " + q->name);
        if (!delta_minimal(it->second.delta, it->second.rel))
            fail(Err::NotMinimal, "environment delta for " + q->name + " is not minimal");
        return {it->second.rel, it->second.delta};
    }
    case QueryExpr::Tag::Select: {
        auto [m, dm] = query_deval(q->a, env, opts);
        return {rel_select(q->pred, m), dselect(q->pred, m, dm)};
    }
    case QueryExpr::Tag::Project: {
        auto [m, dm] = query_deval(q->a, env, opts);
        return {rel_project(m, q->attrs), dproject(m, dm, q->attrs)};
    }
    case QueryExpr::Tag::Join: {
        auto [m, dm] = query_deval(q->a, env, opts);
        auto [n, dn] = query_deval(q->b, env, opts);
        return {rel_join(m, n), djoin(m, dm, n, dn)};
    }
    case QueryExpr::Tag::Rename: {
        auto [m, dm] = query_deval(q->a, env, opts);
        return {rel_rename(m, q->attr, q->attr2), drename(m, dm, q->attr, q->attr2)};
    }
    case QueryExpr::Tag::Union: {
        auto [m, dm] = query_deval(q->a, env, opts);
        auto [n, dn] = query_deval(q->b, env, opts);
        return {rel_union(m, n), dunion(m, dm, n, dn)};
    }
    case QueryExpr::Tag::Difference: {
        auto [m, dm] = query_deval(q->a, env, opts);
        auto [n, dn] = query_deval(q->b, env, opts);
        Relation base = rel_difference(m, n);
        bool ok = rel_subset(n, m) &&
                  rel_subset(delta_apply_unchecked(n, dn), delta_apply_unchecked(m, dm));
        if (ok) return {base, ddifference(m, dm, n, dn)};
        if (opts.strict_incremental)
            fail(Err::PreconditionViolated,
                 "difference node does not satisfy the incremental side conditions");
        // Fall back to the reference derivative for this node.
        std::fputs("warning: difference node outside the incremental side conditions; "
                   "falling back to recomputation\n",
                   stderr);
        Relation updated =
            rel_difference(delta_apply_unchecked(m, dm), delta_apply_unchecked(n, dn));
        return {base, rel_diff(updated, base)};
    }
    case QueryExpr::Tag::Let: {
        auto bound = query_deval(q->a, env, opts);
        DeltaEnv inner = env;
        inner[q->name] = DeltaEnvEntry{bound.first, bound.second};
        return query_deval(q->b, inner, opts);
    }
    }
    fail(Err::Internal, "bad query tag");
}

} // namespace relens
