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

#include "relens/predicate.hpp"

namespace relens {

/// One functional dependency X -> Y between attribute sets.
struct FunDep {
    AttrSet lhs;
    AttrSet rhs;

    bool operator==(const FunDep& other) const = default;
    std::string to_string() const;
};

/// A set of functional dependencies in tree form: the left- and right-hand
/// attribute sets partition their union and the induced graph is a forest.
/// Tree form guarantees record revision has a unique result; dependencies
/// are kept in a canonical order compatible with the forest (parents before
/// children, roots sorted), so revision is also deterministic.
class FunDepSet {
public:
    FunDepSet() = default;

    /// Validates tree form; throws NotTreeForm with a witness otherwise.
    static FunDepSet tree_form(std::vector<FunDep> deps);

    const std::vector<FunDep>& deps() const { return deps_; }
    bool empty() const { return deps_.empty(); }

    AttrSet left() const;
    AttrSet right() const;
    AttrSet outputs() const;
    std::vector<AttrSet> roots() const;

    /// All attributes mentioned by any dependency.
    AttrSet mentioned() const;

    FunDepSet renamed(const std::string& from, const std::string& to) const;
    static FunDepSet merged(const FunDepSet& f, const FunDepSet& g); // F ∪ G, revalidated

    /// Split F as F' ⊎ {X -> A} for the drop lens: removes attribute `a`
    /// from the dependency whose right side contains it and returns the
    /// remainder together with the extracted X -> A. Fails with TypeError
    /// if `a` is not determined by exactly one dependency or appears on a
    /// left-hand side.
    std::pair<FunDepSet, FunDep> split_drop(const std::string& a) const;

    bool operator==(const FunDepSet& other) const { return deps_ == other.deps_; }
    std::string to_string() const;

private:
    std::vector<FunDep> deps_; // topological order, deterministic
};

bool fd_satisfies(const Relation& m, const FunDep& dep);
bool fd_satisfies(const Relation& m, const FunDepSet& f);

/// Revise `m` to agree with `n` on every dependency of `f`, walking the
/// forest from the roots. `n` must satisfy `f`.
Record record_revise(const Record& m, const FunDepSet& f, const Relation& n);
Relation rel_revise(const Relation& m, const FunDepSet& f, const Relation& n);

/// rel_revise followed by union with `n`.
Relation rel_merge(const Relation& m, const FunDepSet& f, const Relation& n);

/// Predicate selecting a superset of the rows a merge with `n` can touch:
/// the disjunction over X -> Y of `X ∈ π_X(n)`. Empty `f` gives the
/// always-false predicate.
PredPtr affected(const FunDepSet& f, const Relation& n);

} // namespace relens
