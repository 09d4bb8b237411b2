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

#include <functional>

#include "relens/fdep.hpp"

namespace relens {

/// A delta relation: disjoint sets of rows to insert and to delete, over
/// one shared domain.
class DeltaRelation {
public:
    DeltaRelation() = default;
    /// Validates equal domains and disjointness.
    DeltaRelation(Relation plus, Relation minus);

    static DeltaRelation empty(AttrSet domain);
    /// Implicit coercion of a relation: (M, ∅).
    static DeltaRelation of_relation(Relation m);

    const Relation& plus() const { return plus_; }
    const Relation& minus() const { return minus_; }
    const AttrSet& domain() const { return plus_.domain(); }
    bool is_empty() const { return plus_.empty_rows() && minus_.empty_rows(); }
    size_t size() const { return plus_.size() + minus_.size(); }

    bool operator==(const DeltaRelation& other) const {
        return plus_ == other.plus_ && minus_ == other.minus_;
    }
    bool operator!=(const DeltaRelation& other) const { return !(*this == other); }
    std::string to_string() const;

private:
    Relation plus_, minus_;
};

/// Δ⁺ ∩ M = ∅ and Δ⁻ ⊆ M: no redundant insertions or deletions.
bool delta_minimal(const DeltaRelation& d, const Relation& m);

/// Minimality-preserving merge ⊕.
DeltaRelation delta_merge(const DeltaRelation& a, const DeltaRelation& b);
DeltaRelation delta_negate(const DeltaRelation& d);
/// a ⊕ (⊖b).
DeltaRelation delta_difference(const DeltaRelation& a, const DeltaRelation& b);

/// (M ∖ Δ⁻) ∪ Δ⁺; requires the delta to be minimal for M.
Relation delta_apply(const Relation& m, const DeltaRelation& d);
/// Same formula without the minimality check, for operator internals.
Relation delta_apply_unchecked(const Relation& m, const DeltaRelation& d);

/// (new ∖ old, old ∖ new); minimal for old, applies back to new.
DeltaRelation rel_diff(const Relation& new_rel, const Relation& old_rel);

/// The minimal delta equivalent to `d` relative to `m`.
DeltaRelation delta_normalize(const DeltaRelation& d, const Relation& m);

/// Delta-correct incremental operators. Each checks minimality of its
/// delta arguments and returns a delta that is minimal for the operator's
/// result on the base input.
DeltaRelation dselect(const PredPtr& p, const Relation& m, const DeltaRelation& dm);
DeltaRelation dproject(const Relation& m, const DeltaRelation& dm, const AttrSet& attrs);
DeltaRelation djoin(const Relation& m, const DeltaRelation& dm, const Relation& n,
                    const DeltaRelation& dn);
DeltaRelation drename(const Relation& m, const DeltaRelation& dm, const std::string& from,
                      const std::string& to);
DeltaRelation dunion(const Relation& m, const DeltaRelation& dm, const Relation& n,
                     const DeltaRelation& dn);
/// Requires N ⊆ M and (N ⊕ ΔN) ⊆ (M ⊕ ΔM); both checked.
DeltaRelation ddifference(const Relation& m, const DeltaRelation& dm, const Relation& n,
                          const DeltaRelation& dn);
/// Incremental revision for a single dependency with a fixed source `n`;
/// requires M and M ⊕ ΔM to satisfy the dependency.
DeltaRelation drevise(const Relation& m, const DeltaRelation& dm, const FunDep& dep,
                      const Relation& n);
/// Incremental merge where only `n` changes and merging `n` into `m` is a
/// no-op (checked). With `use_affected`, only rows selected by the
/// affected-rows predicate participate; the result is identical.
DeltaRelation dmerge(const Relation& m, const FunDepSet& f, const Relation& n,
                     const DeltaRelation& dn, bool use_affected);

/// Reference derivative: op(x ⊕ Δx) ⊖ op(x). Every incremental operator
/// must agree with this on minimal inputs.
DeltaRelation oracle_delta(const std::function<Relation(const Relation&)>& op, const Relation& x,
                           const DeltaRelation& dx);
DeltaRelation oracle_delta2(
    const std::function<Relation(const Relation&, const Relation&)>& op, const Relation& x,
    const DeltaRelation& dx, const Relation& y, const DeltaRelation& dy);

} // namespace relens
