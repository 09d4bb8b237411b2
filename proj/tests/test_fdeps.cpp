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
#include <doctest.h>

#include "relens/sql.hpp"
#include "testutil.hpp"

using namespace relens;
using namespace relens::testutil;

namespace {

// Record revision restated with an explicit dependency order, used to
// check that every valid root-first order gives the same answer.
Record revise_in_order(const Record& m, const std::vector<FunDep>& order, const Relation& n) {
    Record current = m;
    for (const auto& dep : order) {
        FunDepSet single = FunDepSet::tree_form({dep});
        current = record_revise(current, single, n);
    }
    return current;
}

bool valid_order(const std::vector<FunDep>& order) {
    // Parents before children: a dependency may run only after any
    // dependency producing its left-hand side.
    for (size_t i = 0; i < order.size(); ++i)
        for (size_t j = i + 1; j < order.size(); ++j)
            if (!attrs_intersect(order[j].rhs, order[i].lhs).empty()) return false;
    return true;
}

} // namespace

TEST_CASE("tree form validation") {
    // {A -> B, A -> C, B -> D} is in tree form.
    CHECK_NOTHROW(FunDepSet::tree_form(
        {FunDep{{"A"}, {"B"}}, FunDep{{"A"}, {"C"}}, FunDep{{"B"}, {"D"}}}));
    // {A -> B C, B -> D} is not: the node {B,C} overlaps the node {B}.
    CHECK_THROWS_WITH_AS(
        FunDepSet::tree_form({FunDep{{"A"}, {"B", "C"}}, FunDep{{"B"}, {"D"}}}),
        doctest::Contains("overlap"), Error);
    CHECK_NOTHROW(FunDepSet::tree_form({}));

    SUBCASE("cycles and double determination are rejected") {
        CHECK_THROWS_AS(FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"B"}, {"A"}}}),
                        Error);
        CHECK_THROWS_AS(FunDepSet::tree_form({FunDep{{"A"}, {"C"}}, FunDep{{"B"}, {"C"}}}),
                        Error);
    }
}

TEST_CASE("dependency set parts") {
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"B"}, {"D"}}});
    CHECK(f.roots() == std::vector<AttrSet>{{"A"}});
    CHECK(f.left() == attrs_of({"A", "B"}));
    CHECK(f.right() == attrs_of({"B", "D"}));
    CHECK(f.outputs() == attrs_of({"B", "D"}));

    FunDepSet empty;
    CHECK(empty.roots().empty());
    CHECK(empty.left().empty());
    CHECK(empty.outputs().empty());

    FunDepSet two = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"C"}, {"D"}}});
    CHECK(two.roots() == std::vector<AttrSet>{{"A"}, {"C"}});
}

TEST_CASE("dependency satisfaction") {
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}});
    CHECK_FALSE(fd_satisfies(table(attrs_of({"A", "B"}), {{1, 2}, {1, 3}}), f));
    CHECK(fd_satisfies(Relation::empty(attrs_of({"A", "B"})), f));

    // The five-row track listing satisfies track -> date rating.
    Relation tracks = Relation::from_records({
        Record{{"track", S("Lullaby")}, {"date", V(1989)}, {"rating", V(3)}, {"album", S("Galore")}},
        Record{{"track", S("Lullaby")}, {"date", V(1989)}, {"rating", V(3)}, {"album", S("Show")}},
        Record{{"track", S("Lovesong")}, {"date", V(1989)}, {"rating", V(5)}, {"album", S("Galore")}},
        Record{{"track", S("Lovesong")}, {"date", V(1989)}, {"rating", V(5)}, {"album", S("Paris")}},
        Record{{"track", S("Trust")}, {"date", V(1992)}, {"rating", V(4)}, {"album", S("Wish")}},
    });
    FunDepSet track_fd = FunDepSet::tree_form({FunDep{{"track"}, {"date", "rating"}}});
    CHECK(fd_satisfies(tracks, track_fd));
}

TEST_CASE("record and relational revision") {
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}});
    Relation n = table(attrs_of({"A", "B"}), {{1, 42}});

    CHECK(record_revise(Record{{"A", V(1)}, {"B", V(2)}}, f, n) ==
          Record{{"A", V(1)}, {"B", V(42)}});
    CHECK(record_revise(Record{{"A", V(2)}, {"B", V(3)}}, f, n) ==
          Record{{"A", V(2)}, {"B", V(3)}});
    CHECK(record_revise(Record{{"A", V(1)}, {"B", V(2)}}, FunDepSet(), n) ==
          Record{{"A", V(1)}, {"B", V(2)}});

    Relation m = table(attrs_of({"A", "B"}), {{1, 2}, {2, 3}});
    CHECK(rel_revise(m, f, n) == table(attrs_of({"A", "B"}), {{1, 42}, {2, 3}}));
    CHECK(rel_revise(Relation::empty(m.domain()), f, n) == Relation::empty(m.domain()));
    CHECK(rel_revise(m, f, Relation::empty(m.domain())) == m);
    CHECK_THROWS_AS(rel_revise(m, f, table(attrs_of({"A", "B"}), {{1, 5}, {1, 6}})), Error);
}

TEST_CASE("relational merge") {
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}});
    Relation m = table(attrs_of({"A", "B"}), {{1, 2}, {2, 3}});
    Relation n = table(attrs_of({"A", "B"}), {{1, 42}});
    CHECK(rel_merge(m, f, n) == table(attrs_of({"A", "B"}), {{1, 42}, {2, 3}}));
    CHECK(rel_merge(m, f, Relation::empty(m.domain())) == m);
    CHECK(rel_merge(Relation::empty(m.domain()), f, n) == n);
}

TEST_CASE("affected-rows predicate") {
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}});
    Relation n = table(attrs_of({"A", "B"}), {{1, 7}, {2, 8}});
    PredPtr p = affected(f, n);
    CHECK(sql_where(p) == "A IN (1, 2)");

    CHECK(sql_where(affected(FunDepSet(), n)) == "NOT (TRUE)");

    FunDepSet chain = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"B"}, {"D"}}});
    Relation one = Relation::from_records(
        {Record{{"A", V(1)}, {"B", V(5)}, {"D", V(9)}}});
    CHECK(sql_where(affected(chain, one)) == "(A IN (1)) OR (B IN (5))");
}

TEST_CASE("revision is order independent for tree-form dependencies") {
    Rng rng(23);
    std::vector<FunDep> deps = {FunDep{{"A"}, {"B"}}, FunDep{{"A"}, {"C"}},
                                FunDep{{"B"}, {"D"}}};
    FunDepSet f = FunDepSet::tree_form(deps);
    AttrSet attrs = attrs_of({"A", "B", "C", "D"});
    FdTableGen gen{attrs, f, 5, 3};
    for (int i = 0; i < 100; ++i) {
        Relation n = gen.rows(rng, 4);
        Record m{{"A", V(pick_int(rng, 0, 4))},
                 {"B", V(pick_int(rng, 0, 4))},
                 {"C", V(pick_int(rng, 0, 4))},
                 {"D", V(pick_int(rng, 0, 4))}};
        Record expected = record_revise(m, f, n);
        // Every root-first permutation of the dependencies agrees.
        std::vector<FunDep> order = deps;
        std::sort(order.begin(), order.end(),
                  [](const FunDep& a, const FunDep& b) { return a.lhs < b.lhs; });
        do {
            if (!valid_order(order)) continue;
            CHECK(revise_in_order(m, order, n) == expected);
        } while (std::next_permutation(order.begin(), order.end(),
                                       [](const FunDep& a, const FunDep& b) {
                                           return a.lhs != b.lhs ? a.lhs < b.lhs : a.rhs < b.rhs;
                                       }));
    }
}

TEST_CASE("merge properties on random instances") {
    Rng rng(31);
    AttrSet attrs = attrs_of({"A", "B", "C"});
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"B"}, {"C"}}});
    for (int i = 0; i < 300; ++i) {
        FdTableGen g1{attrs, f, 6, rng()};
        FdTableGen g2{attrs, f, 6, rng()};
        Relation m = g1.rows(rng, 8);
        Relation n = g2.rows(rng, 4);

        Relation merged = rel_merge(m, f, n);
        // N is always contained in the merge.
        CHECK(rel_subset(n, merged));
        // Merging conformant relations stays conformant.
        CHECK(fd_satisfies(m, f));
        CHECK(fd_satisfies(n, f));
        CHECK(fd_satisfies(merged, f));
        // Revision never touches attributes outside outputs(F).
        AttrSet outside = attrs_minus(attrs, f.outputs());
        for (const auto& rec : m.records()) {
            Record revised = record_revise(rec, f, n);
            CHECK(rec.project(outside) == revised.project(outside));
        }
    }
}

TEST_CASE("affected predicate soundness for merge deltas") {
    Rng rng(37);
    AttrSet attrs = attrs_of({"A", "B"});
    FunDepSet f = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}});
    for (int i = 0; i < 300; ++i) {
        FdTableGen g1{attrs, f, 6, rng()};
        FdTableGen g2{attrs, f, 6, rng()};
        Relation m = g1.rows(rng, 10);
        Relation n_plus = g2.rows(rng, 3);

        DeltaRelation full = rel_diff(rel_merge(m, f, n_plus), m);
        Relation restricted = rel_select(affected(f, n_plus), m);
        DeltaRelation cheap = rel_diff(rel_merge(restricted, f, n_plus), restricted);
        CHECK(full == cheap);
    }
}
