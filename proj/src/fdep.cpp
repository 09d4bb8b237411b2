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
#include "relens/fdep.hpp"

#include <algorithm>
#include <unordered_map>

namespace relens {

namespace {
std::string attrs_text(const AttrSet& a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) s += (i ? " " : "") + a[i];
    return s;
}
} // namespace

std::string FunDep::to_string() const { return attrs_text(lhs) + " -> " + attrs_text(rhs); }

FunDepSet FunDepSet::tree_form(std::vector<FunDep> deps) {
    for (auto& d : deps) {
        d.lhs = attrs_sorted(d.lhs);
        d.rhs = attrs_sorted(d.rhs);
        if (d.lhs.empty() || d.rhs.empty())
            fail(Err::NotTreeForm, "dependency with an empty side: " + d.to_string());
    }
    std::sort(deps.begin(), deps.end(), [](const FunDep& a, const FunDep& b) {
        return a.lhs != b.lhs ? a.lhs < b.lhs : a.rhs < b.rhs;
    });
    deps.erase(std::unique(deps.begin(), deps.end()), deps.end());

    // Node set: every distinct lhs/rhs attribute set. Distinct nodes must
    // be disjoint (they partition their union).
    std::vector<AttrSet> nodes;
    auto add_node = [&](const AttrSet& x) {
        if (std::find(nodes.begin(), nodes.end(), x) == nodes.end()) nodes.push_back(x);
    };
    for (const auto& d : deps) {
        add_node(d.lhs);
        add_node(d.rhs);
    }
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = i + 1; j < nodes.size(); ++j) {
            AttrSet overlap = attrs_intersect(nodes[i], nodes[j]);
            if (!overlap.empty())
                fail(Err::NotTreeForm, "node sets {" + attrs_text(nodes[i]) + "} and {" +
                                           attrs_text(nodes[j]) + "} overlap on {" +
                                           attrs_text(overlap) +
                                           "}; rewrite the dependencies so attribute groups "
                                           "partition (e.g. split combined right-hand sides)");
        }

    // Forest check: in-degree at most one and no cycles, via repeated
    // removal of roots (Kahn). Ties broken lexicographically so the stored
    // order is canonical.
    std::vector<int> indeg(nodes.size(), 0);
    auto node_id = [&](const AttrSet& x) {
        return static_cast<size_t>(std::find(nodes.begin(), nodes.end(), x) - nodes.begin());
    };
    for (const auto& d : deps) {
        size_t y = node_id(d.rhs);
        indeg[y]++;
        if (indeg[y] > 1)
            fail(Err::NotTreeForm,
                 "attribute group {" + attrs_text(d.rhs) + "} is determined more than once");
    }

    std::vector<FunDep> ordered;
    while (ordered.size() < deps.size()) {
        // Pick the lexicographically least unprocessed dependency whose lhs
        // node currently has in-degree zero.
        bool progress = false;
        for (const auto& d : deps) {
            if (std::find(ordered.begin(), ordered.end(), d) != ordered.end()) continue;
            if (indeg[node_id(d.lhs)] != 0) continue;
            ordered.push_back(d);
            indeg[node_id(d.rhs)]--;
            progress = true;
            break;
        }
        if (!progress)
            fail(Err::NotTreeForm, "dependency graph contains a cycle");
    }

    FunDepSet out;
    out.deps_ = std::move(ordered);
    return out;
}

AttrSet FunDepSet::left() const {
    std::vector<std::string> all;
    for (const auto& d : deps_) all.insert(all.end(), d.lhs.begin(), d.lhs.end());
    return attrs_sorted(std::move(all));
}

AttrSet FunDepSet::right() const {
    std::vector<std::string> all;
    for (const auto& d : deps_) all.insert(all.end(), d.rhs.begin(), d.rhs.end());
    return attrs_sorted(std::move(all));
}

AttrSet FunDepSet::outputs() const {
    // In tree form every derivable X -> Y with X ∩ Y = ∅ has Y inside the
    // union of right-hand sides, so outputs coincide with right().
    return right();
}

std::vector<AttrSet> FunDepSet::roots() const {
    AttrSet r = right();
    std::vector<AttrSet> out;
    for (const auto& d : deps_) {
        if (!attrs_intersect(d.lhs, r).empty()) continue;
        if (std::find(out.begin(), out.end(), d.lhs) == out.end()) out.push_back(d.lhs);
    }
    std::sort(out.begin(), out.end());
    return out;
}

AttrSet FunDepSet::mentioned() const { return attrs_union(left(), right()); }

FunDepSet FunDepSet::renamed(const std::string& from, const std::string& to) const {
    std::vector<FunDep> deps;
    for (const auto& d : deps_)
        deps.push_back(FunDep{attrs_rename(d.lhs, from, to), attrs_rename(d.rhs, from, to)});
    return tree_form(std::move(deps));
}

FunDepSet FunDepSet::merged(const FunDepSet& f, const FunDepSet& g) {
    std::vector<FunDep> deps = f.deps_;
    deps.insert(deps.end(), g.deps_.begin(), g.deps_.end());
    return tree_form(std::move(deps));
}

std::pair<FunDepSet, FunDep> FunDepSet::split_drop(const std::string& a) const {
    if (attrs_contains(left(), a))
        fail(Err::TypeError, "cannot drop '" + a + "': it determines other attributes");
    const FunDep* found = nullptr;
    for (const auto& d : deps_) {
        if (!attrs_contains(d.rhs, a)) continue;
        if (found) fail(Err::Internal, "attribute determined twice in tree form");
        found = &d;
    }
    if (!found)
        fail(Err::TypeError,
             "cannot drop '" + a + "': no dependency X -> " + a + " to split off");
    FunDep extracted{found->lhs, AttrSet{a}};
    std::vector<FunDep> rest;
    for (const auto& d : deps_) {
        if (&d == found) {
            AttrSet remaining = attrs_minus(d.rhs, AttrSet{a});
            if (!remaining.empty()) rest.push_back(FunDep{d.lhs, remaining});
        } else {
            rest.push_back(d);
        }
    }
    return {tree_form(std::move(rest)), extracted};
}

std::string FunDepSet::to_string() const {
    std::string s;
    for (size_t i = 0; i < deps_.size(); ++i) s += (i ? "; " : "") + deps_[i].to_string();
    return s;
}

namespace {

// Per-dependency index of `n`: lhs values -> rhs values. Throws
// FDViolation if two rows of `n` disagree.
struct DepIndex {
    std::vector<size_t> lhs_idx, rhs_idx;
    std::unordered_map<Row, Row, RowHash> map;
};

DepIndex index_dep(const FunDep& dep, const Relation& n, bool check) {
    DepIndex ix;
    for (const auto& a : dep.lhs) ix.lhs_idx.push_back(n.index_of_checked(a));
    for (const auto& a : dep.rhs) ix.rhs_idx.push_back(n.index_of_checked(a));
    for (const auto& r : n.rows()) {
        Row key, val;
        for (size_t i : ix.lhs_idx) key.push_back(r[i]);
        for (size_t i : ix.rhs_idx) val.push_back(r[i]);
        auto [it, inserted] = ix.map.emplace(std::move(key), val);
        if (!inserted && check && it->second != val)
            fail(Err::FDViolation, "revision source violates " + dep.to_string());
    }
    return ix;
}

} // namespace

bool fd_satisfies(const Relation& m, const FunDep& dep) {
    std::vector<size_t> lhs_idx, rhs_idx;
    for (const auto& a : dep.lhs) lhs_idx.push_back(m.index_of_checked(a));
    for (const auto& a : dep.rhs) rhs_idx.push_back(m.index_of_checked(a));
    std::unordered_map<Row, Row, RowHash> seen;
    seen.reserve(m.size());
    for (const auto& r : m.rows()) {
        Row key, val;
        for (size_t i : lhs_idx) key.push_back(r[i]);
        for (size_t i : rhs_idx) val.push_back(r[i]);
        auto it = seen.find(key);
        if (it == seen.end())
            seen.emplace(std::move(key), std::move(val));
        else if (it->second != val)
            return false;
    }
    return true;
}

bool fd_satisfies(const Relation& m, const FunDepSet& f) {
    for (const auto& d : f.deps())
        if (!fd_satisfies(m, d)) return false;
    return true;
}

Record record_revise(const Record& m, const FunDepSet& f, const Relation& n) {
    Record current = m;
    for (const auto& dep : f.deps()) { // topological order
        DepIndex ix = index_dep(dep, n, true);
        Row key;
        for (const auto& a : dep.lhs) key.push_back(current.get(a));
        auto it = ix.map.find(key);
        if (it == ix.map.end()) continue;
        std::vector<std::pair<std::string, Value>> upd;
        for (size_t i = 0; i < dep.rhs.size(); ++i) upd.emplace_back(dep.rhs[i], it->second[i]);
        current = current.update(Record::from_fields(std::move(upd)));
    }
    return current;
}

Relation rel_revise(const Relation& m, const FunDepSet& f, const Relation& n) {
    if (f.empty() || n.empty_rows() || m.empty_rows()) {
        if (!fd_satisfies(n, f)) fail(Err::FDViolation, "revision source violates dependencies");
        return m;
    }
    // Positional fast path over m's rows.
    std::vector<DepIndex> indices;
    std::vector<std::vector<size_t>> m_lhs, m_rhs;
    for (const auto& dep : f.deps()) {
        indices.push_back(index_dep(dep, n, true));
        std::vector<size_t> li, ri;
        for (const auto& a : dep.lhs) li.push_back(m.index_of_checked(a));
        for (const auto& a : dep.rhs) ri.push_back(m.index_of_checked(a));
        m_lhs.push_back(std::move(li));
        m_rhs.push_back(std::move(ri));
    }
    std::vector<Row> rows;
    rows.reserve(m.size());
    for (const auto& r : m.rows()) {
        Row out = r;
        for (size_t d = 0; d < indices.size(); ++d) {
            Row key;
            for (size_t i : m_lhs[d]) key.push_back(out[i]);
            auto it = indices[d].map.find(key);
            if (it == indices[d].map.end()) continue;
            for (size_t i = 0; i < m_rhs[d].size(); ++i) out[m_rhs[d][i]] = it->second[i];
        }
        rows.push_back(std::move(out));
    }
    return Relation::from_rows(m.domain(), std::move(rows));
}

Relation rel_merge(const Relation& m, const FunDepSet& f, const Relation& n) {
    return rel_union(rel_revise(m, f, n), n);
}

PredPtr affected(const FunDepSet& f, const Relation& n) {
    PredPtr out;
    for (const auto& dep : f.deps()) {
        PredPtr clause = pred_in(dep.lhs, rel_project(n, dep.lhs));
        out = out ? pred_or(out, clause) : clause;
    }
    return out ? out : pred_false();
}

} // namespace relens
