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
#include "relens/delta.hpp"

namespace relens {

DeltaRelation::DeltaRelation(Relation plus, Relation minus) {
    if (plus.domain() != minus.domain())
        fail(Err::DomainMismatch, "delta components must share one domain");
    Relation overlap = rel_intersect(plus, minus);
    if (!overlap.empty_rows())
        fail(Err::Overlap,
             "delta components overlap, e.g. " + overlap.record_at(0).to_string());
    plus_ = std::move(plus);
    minus_ = std::move(minus);
}

DeltaRelation DeltaRelation::empty(AttrSet domain) {
    Relation none = Relation::empty(std::move(domain));
    return DeltaRelation(none, none);
}

DeltaRelation DeltaRelation::of_relation(Relation m) {
    Relation none = Relation::empty(m.domain());
    return DeltaRelation(std::move(m), std::move(none));
}

std::string DeltaRelation::to_string() const {
    return "(+" + plus_.to_string() + ", -" + minus_.to_string() + ")";
}

bool delta_minimal(const DeltaRelation& d, const Relation& m) {
    if (d.domain() != m.domain()) fail(Err::DomainMismatch, "delta and relation domains differ");
    return rel_intersect(d.plus(), m).empty_rows() && rel_subset(d.minus(), m);
}

DeltaRelation delta_merge(const DeltaRelation& a, const DeltaRelation& b) {
    if (a.domain() != b.domain()) fail(Err::DomainMismatch, "merged deltas must share a domain");
    Relation plus = rel_union(rel_difference(a.plus(), b.minus()),
                              rel_difference(b.plus(), a.minus()));
    Relation minus = rel_union(rel_difference(a.minus(), b.plus()),
                               rel_difference(b.minus(), a.plus()));
    return DeltaRelation(std::move(plus), std::move(minus));
}

DeltaRelation delta_negate(const DeltaRelation& d) { return DeltaRelation(d.minus(), d.plus()); }

DeltaRelation delta_difference(const DeltaRelation& a, const DeltaRelation& b) {
    return delta_merge(a, delta_negate(b));
}

Relation delta_apply_unchecked(const Relation& m, const DeltaRelation& d) {
    return rel_union(rel_difference(m, d.minus()), d.plus());
}

Relation delta_apply(const Relation& m, const DeltaRelation& d) {
    if (!delta_minimal(d, m))
        fail(Err::NotMinimal, "delta is not minimal for the relation it is applied to");
    return delta_apply_unchecked(m, d);
}

DeltaRelation rel_diff(const Relation& new_rel, const Relation& old_rel) {
    if (new_rel.domain() != old_rel.domain())
        fail(Err::DomainMismatch, "diffed relations must share a domain");
    return DeltaRelation(rel_difference(new_rel, old_rel), rel_difference(old_rel, new_rel));
}

DeltaRelation delta_normalize(const DeltaRelation& d, const Relation& m) {
    if (d.domain() != m.domain()) fail(Err::DomainMismatch, "delta and relation domains differ");
    Relation plus = rel_difference(d.plus(), m);
    Relation minus = rel_difference(rel_intersect(m, d.minus()), d.plus());
    return DeltaRelation(std::move(plus), std::move(minus));
}

namespace {
void require_minimal(const DeltaRelation& d, const Relation& m, const char* who) {
    if (!delta_minimal(d, m))
        fail(Err::NotMinimal, std::string(who) + " requires a minimal delta argument");
}
} // namespace

DeltaRelation dselect(const PredPtr& p, const Relation& m, const DeltaRelation& dm) {
    require_minimal(dm, m, "dselect");
    return DeltaRelation(rel_select(p, dm.plus()), rel_select(p, dm.minus()));
}

DeltaRelation dproject(const Relation& m, const DeltaRelation& dm, const AttrSet& attrs) {
    require_minimal(dm, m, "dproject");
    Relation plus = rel_difference(rel_project(dm.plus(), attrs), rel_project(m, attrs));
    Relation minus = rel_difference(rel_project(dm.minus(), attrs),
                                    rel_project(delta_apply_unchecked(m, dm), attrs));
    return DeltaRelation(std::move(plus), std::move(minus));
}

DeltaRelation djoin(const Relation& m, const DeltaRelation& dm, const Relation& n,
                    const DeltaRelation& dn) {
    require_minimal(dm, m, "djoin");
    require_minimal(dn, n, "djoin");
    Relation m_new = delta_apply_unchecked(m, dm);
    Relation n_new = delta_apply_unchecked(n, dn);
    Relation plus = rel_union(rel_join(m_new, dn.plus()), rel_join(dm.plus(), n_new));
    Relation minus = rel_union(rel_join(dm.minus(), n), rel_join(m, dn.minus()));
    return DeltaRelation(std::move(plus), std::move(minus));
}

DeltaRelation drename(const Relation& m, const DeltaRelation& dm, const std::string& from,
                      const std::string& to) {
    require_minimal(dm, m, "drename");
    return DeltaRelation(rel_rename(dm.plus(), from, to), rel_rename(dm.minus(), from, to));
}

DeltaRelation dunion(const Relation& m, const DeltaRelation& dm, const Relation& n,
                     const DeltaRelation& dn) {
    require_minimal(dm, m, "dunion");
    require_minimal(dn, n, "dunion");
    Relation m_new = delta_apply_unchecked(m, dm);
    Relation n_new = delta_apply_unchecked(n, dn);
    Relation plus = rel_union(rel_difference(dm.plus(), n), rel_difference(dn.plus(), m));
    Relation minus =
        rel_union(rel_difference(dm.minus(), n_new), rel_difference(dn.minus(), m_new));
    return DeltaRelation(std::move(plus), std::move(minus));
}

DeltaRelation ddifference(const Relation& m, const DeltaRelation& dm, const Relation& n,
                          const DeltaRelation& dn) {
    require_minimal(dm, m, "ddifference");
    require_minimal(dn, n, "ddifference");
    if (!rel_subset(n, m))
        fail(Err::PreconditionViolated, "incremental difference requires N ⊆ M");
    if (!rel_subset(delta_apply_unchecked(n, dn), delta_apply_unchecked(m, dm)))
        fail(Err::PreconditionViolated,
             "incremental difference requires the updated N to stay inside the updated M");
    return delta_difference(dm, dn);
}

DeltaRelation drevise(const Relation& m, const DeltaRelation& dm, const FunDep& dep,
                      const Relation& n) {
    require_minimal(dm, m, "drevise");
    FunDepSet f = FunDepSet::tree_form({dep});
    if (!fd_satisfies(m, f))
        fail(Err::FDViolation, "drevise requires the base relation to satisfy " + dep.to_string());
    if (!fd_satisfies(delta_apply_unchecked(m, dm), f))
        fail(Err::FDViolation,
             "drevise requires the updated relation to satisfy " + dep.to_string());
    return DeltaRelation(rel_revise(dm.plus(), f, n), rel_revise(dm.minus(), f, n));
}

DeltaRelation dmerge(const Relation& m, const FunDepSet& f, const Relation& n,
                     const DeltaRelation& dn, bool use_affected) {
    require_minimal(dn, n, "dmerge");
    if (rel_merge(m, f, n) != m)
        fail(Err::PreconditionViolated, "dmerge requires merging N into M to be a no-op");
    if (!fd_satisfies(delta_apply_unchecked(n, dn), f))
        fail(Err::FDViolation, "dmerge requires the updated N to satisfy the dependencies");
    if (!use_affected) return rel_diff(rel_merge(m, f, dn.plus()), m);
    Relation subset = rel_select(affected(f, dn.plus()), m);
    return rel_diff(rel_merge(subset, f, dn.plus()), subset);
}

DeltaRelation oracle_delta(const std::function<Relation(const Relation&)>& op, const Relation& x,
                           const DeltaRelation& dx) {
    if (!delta_minimal(dx, x)) fail(Err::NotMinimal, "oracle requires a minimal delta");
    return rel_diff(op(delta_apply(x, dx)), op(x));
}

DeltaRelation oracle_delta2(
    const std::function<Relation(const Relation&, const Relation&)>& op, const Relation& x,
    const DeltaRelation& dx, const Relation& y, const DeltaRelation& dy) {
    if (!delta_minimal(dx, x) || !delta_minimal(dy, y))
        fail(Err::NotMinimal, "oracle requires minimal deltas");
    return rel_diff(op(delta_apply(x, dx), delta_apply(y, dy)), op(x, y));
}

} // namespace relens
