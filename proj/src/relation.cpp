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
#include "relens/relation.hpp"

#include <algorithm>
#include <unordered_map>

namespace relens {

int row_compare(const Row& a, const Row& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = a[i].canonical_compare(b[i]);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

namespace {
bool row_less(const Row& a, const Row& b) { return row_compare(a, b) < 0; }
} // namespace

Relation Relation::empty(AttrSet domain) {
    return from_sorted_rows(std::move(domain), {});
}

Relation Relation::from_rows(AttrSet domain, std::vector<Row> rows) {
    for (const auto& r : rows)
        if (r.size() != domain.size())
            fail(Err::DomainMismatch, "row arity does not match relation domain");
    std::sort(rows.begin(), rows.end(), row_less);
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    Relation rel;
    rel.domain_ = std::move(domain);
    rel.rows_ = std::move(rows);
    return rel;
}

Relation Relation::from_sorted_rows(AttrSet domain, std::vector<Row> rows) {
    Relation rel;
    rel.domain_ = std::move(domain);
    rel.rows_ = std::move(rows);
    return rel;
}

Relation Relation::from_records(const std::vector<Record>& records) {
    if (records.empty()) fail(Err::DomainMismatch, "cannot infer domain from zero records");
    AttrSet domain = records.front().domain();
    std::vector<Row> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.domain() != domain)
            fail(Err::DomainMismatch, "records do not share one domain");
        Row row;
        row.reserve(domain.size());
        for (const auto& f : rec.fields()) row.push_back(f.second);
        rows.push_back(std::move(row));
    }
    return from_rows(std::move(domain), std::move(rows));
}

std::optional<size_t> Relation::index_of(const std::string& attr) const {
    auto it = std::lower_bound(domain_.begin(), domain_.end(), attr);
    if (it == domain_.end() || *it != attr) return std::nullopt;
    return static_cast<size_t>(it - domain_.begin());
}

size_t Relation::index_of_checked(const std::string& attr) const {
    auto i = index_of(attr);
    if (!i) fail(Err::MissingAttribute, "relation has no attribute '" + attr + "'");
    return *i;
}

bool Relation::contains(const Row& row) const {
    return std::binary_search(rows_.begin(), rows_.end(), row, row_less);
}

Record Relation::record_at(size_t i) const {
    std::vector<std::pair<std::string, Value>> fields;
    fields.reserve(domain_.size());
    for (size_t c = 0; c < domain_.size(); ++c) fields.emplace_back(domain_[c], rows_[i][c]);
    return Record::from_fields(std::move(fields));
}

std::vector<Record> Relation::records() const {
    std::vector<Record> out;
    out.reserve(rows_.size());
    for (size_t i = 0; i < rows_.size(); ++i) out.push_back(record_at(i));
    return out;
}

std::string Relation::to_string() const {
    std::string s = "{";
    for (size_t i = 0; i < rows_.size(); ++i) {
        if (i) s += ", ";
        s += record_at(i).to_string();
    }
    return s + "}";
}

namespace {
void require_same_domain(const Relation& m, const Relation& n, const char* op) {
    if (m.domain() != n.domain())
        fail(Err::DomainMismatch, std::string(op) + " requires equal domains");
}
} // namespace

Relation rel_union(const Relation& m, const Relation& n) {
    require_same_domain(m, n, "union");
    std::vector<Row> out;
    out.reserve(m.size() + n.size());
    std::set_union(m.rows().begin(), m.rows().end(), n.rows().begin(), n.rows().end(),
                   std::back_inserter(out), row_less);
    return Relation::from_sorted_rows(m.domain(), std::move(out));
}

Relation rel_difference(const Relation& m, const Relation& n) {
    require_same_domain(m, n, "difference");
    std::vector<Row> out;
    std::set_difference(m.rows().begin(), m.rows().end(), n.rows().begin(), n.rows().end(),
                        std::back_inserter(out), row_less);
    return Relation::from_sorted_rows(m.domain(), std::move(out));
}

Relation rel_intersect(const Relation& m, const Relation& n) {
    require_same_domain(m, n, "intersection");
    std::vector<Row> out;
    std::set_intersection(m.rows().begin(), m.rows().end(), n.rows().begin(), n.rows().end(),
                          std::back_inserter(out), row_less);
    return Relation::from_sorted_rows(m.domain(), std::move(out));
}

bool rel_subset(const Relation& m, const Relation& n) {
    require_same_domain(m, n, "subset");
    return std::includes(n.rows().begin(), n.rows().end(), m.rows().begin(), m.rows().end(),
                         row_less);
}

Relation rel_project(const Relation& m, const AttrSet& attrs) {
    if (!attrs_subset(attrs, m.domain()))
        fail(Err::MissingAttribute, "projection attributes not all present");
    std::vector<size_t> idx;
    idx.reserve(attrs.size());
    for (const auto& a : attrs) idx.push_back(m.index_of_checked(a));
    std::vector<Row> rows;
    rows.reserve(m.size());
    for (const auto& r : m.rows()) {
        Row out;
        out.reserve(idx.size());
        for (size_t i : idx) out.push_back(r[i]);
        rows.push_back(std::move(out));
    }
    return Relation::from_rows(attrs, std::move(rows));
}

Relation rel_join(const Relation& m, const Relation& n) {
    const AttrSet shared = attrs_intersect(m.domain(), n.domain());
    const AttrSet out_domain = attrs_union(m.domain(), n.domain());

    // Probe the smaller side with a hash on the shared attributes.
    const Relation& build = m.size() <= n.size() ? m : n;
    const Relation& probe = m.size() <= n.size() ? n : m;

    std::vector<size_t> build_key, probe_key;
    for (const auto& a : shared) {
        build_key.push_back(build.index_of_checked(a));
        probe_key.push_back(probe.index_of_checked(a));
    }
    auto key_of = [](const Row& r, const std::vector<size_t>& idx) {
        Row k;
        k.reserve(idx.size());
        for (size_t i : idx) k.push_back(r[i]);
        return k;
    };

    std::unordered_map<Row, std::vector<const Row*>, RowHash> index;
    index.reserve(build.size());
    for (const auto& r : build.rows()) index[key_of(r, build_key)].push_back(&r);

    // Column sources for the output: from the probe row where present,
    // otherwise from the build row.
    std::vector<std::pair<bool, size_t>> src; // (from_probe, index)
    for (const auto& a : out_domain) {
        if (auto i = probe.index_of(a))
            src.emplace_back(true, *i);
        else
            src.emplace_back(false, *build.index_of(a));
    }

    std::vector<Row> rows;
    for (const auto& pr : probe.rows()) {
        auto it = index.find(key_of(pr, probe_key));
        if (it == index.end()) continue;
        for (const Row* br : it->second) {
            Row out;
            out.reserve(src.size());
            for (const auto& [from_probe, i] : src) out.push_back(from_probe ? pr[i] : (*br)[i]);
            rows.push_back(std::move(out));
        }
    }
    return Relation::from_rows(out_domain, std::move(rows));
}

Relation rel_rename(const Relation& m, const std::string& from, const std::string& to) {
    if (!attrs_contains(m.domain(), from))
        fail(Err::BadRename, "attribute '" + from + "' not present");
    if (attrs_contains(m.domain(), to))
        fail(Err::BadRename, "attribute '" + to + "' already present");
    AttrSet new_domain = attrs_rename(m.domain(), from, to);
    size_t old_pos = m.index_of_checked(from);
    // Position of each new column in the old row.
    std::vector<size_t> src;
    for (const auto& a : new_domain) {
        if (a == to)
            src.push_back(old_pos);
        else
            src.push_back(m.index_of_checked(a));
    }
    std::vector<Row> rows;
    rows.reserve(m.size());
    for (const auto& r : m.rows()) {
        Row out;
        out.reserve(src.size());
        for (size_t i : src) out.push_back(r[i]);
        rows.push_back(std::move(out));
    }
    return Relation::from_rows(std::move(new_domain), std::move(rows));
}

} // namespace relens
