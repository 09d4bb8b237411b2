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
#include "relens/store.hpp"

#include <algorithm>
#include <chrono>

namespace relens {

namespace {

// Index-driven candidate row set for a predicate, or nullopt when only a
// scan will do. The candidate set may overapproximate; callers re-filter.
std::optional<std::vector<size_t>> candidates(
    const Predicate& p,
    const std::function<const std::vector<size_t>*(const std::string&, const Value&)>& probe) {
    switch (p.tag) {
    case Predicate::Tag::AttrEqConst: {
        std::vector<size_t> out;
        if (const auto* rows = probe(p.attr, p.value)) out = *rows;
        return out;
    }
    case Predicate::Tag::TupleIn: {
        // Probe on the first attribute of the tuple; the caller's
        // re-filter enforces full-tuple membership.
        std::vector<size_t> out;
        size_t col = p.rel.index_of_checked(p.attrs.front());
        for (const auto& row : p.rel.rows())
            if (const auto* rows = probe(p.attrs.front(), row[col]))
                out.insert(out.end(), rows->begin(), rows->end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    case Predicate::Tag::And: {
        auto a = candidates(*p.a, probe);
        auto b = candidates(*p.b, probe);
        if (a && b) return a->size() <= b->size() ? a : b;
        return a ? a : b;
    }
    case Predicate::Tag::Or: {
        auto a = candidates(*p.a, probe);
        if (!a) return std::nullopt;
        auto b = candidates(*p.b, probe);
        if (!b) return std::nullopt;
        std::vector<size_t> out;
        std::set_union(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(out));
        return out;
    }
    default: return std::nullopt;
    }
}

} // namespace

void TableStore::create_table(const std::string& name, RelationType type, Relation contents) {
    check_conforms(contents, type, "table " + name);
    Table t;
    t.type = std::move(type);
    t.contents = std::move(contents);
    tables_.erase(name);
    tables_.emplace(name, std::move(t));
}

bool TableStore::has_table(const std::string& name) const { return tables_.count(name) > 0; }

std::vector<std::string> TableStore::table_names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : tables_) out.push_back(name);
    return out;
}

const TableStore::Table& TableStore::table(const std::string& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) fail(Err::UnknownTable, "unknown table '" + name + "'");
    return it->second;
}

const RelationType& TableStore::table_type(const std::string& name) const {
    return table(name).type;
}

const Relation& TableStore::table_contents(const std::string& name) const {
    return table(name).contents;
}

Relation TableStore::run_fetch(const Table& t, const PredPtr& p) const {
    if (pred_is_true(p)) return t.contents;
    const Relation& m = t.contents;
    auto probe = [&](const std::string& attr,
                     const Value& v) -> const std::vector<size_t>* {
        if (!m.index_of(attr)) return nullptr;
        auto it = t.index.find(attr);
        if (it == t.index.end()) {
            auto& ix = t.index[attr];
            size_t col = m.index_of_checked(attr);
            for (size_t i = 0; i < m.rows().size(); ++i) ix[m.rows()[i][col]].push_back(i);
            it = t.index.find(attr);
        }
        auto vi = it->second.find(v);
        static const std::vector<size_t> none;
        return vi == it->second.end() ? &none : &vi->second;
    };
    auto cand = candidates(*p, probe);
    std::vector<Row> rows;
    if (cand) {
        for (size_t i : *cand)
            if (pred_eval(p, m.domain(), m.rows()[i])) rows.push_back(m.rows()[i]);
        return Relation::from_rows(m.domain(), std::move(rows));
    }
    for (const auto& r : m.rows())
        if (pred_eval(p, m.domain(), r)) rows.push_back(r);
    return Relation::from_sorted_rows(m.domain(), std::move(rows));
}

Relation TableStore::fetch(const std::string& name, const PredPtr& p) const {
    const Table& t = table(name);
    if (!recording_) return run_fetch(t, p);
    auto start = std::chrono::steady_clock::now();
    Relation out = run_fetch(t, p);
    fetch_ns_ += std::chrono::duration_cast<std::chrono::nanoseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    log_.push_back(FetchRecord{name, p});
    return out;
}

void TableStore::apply_delta(const std::string& name, const DeltaRelation& d) {
    auto it = tables_.find(name);
    if (it == tables_.end()) fail(Err::UnknownTable, "unknown table '" + name + "'");
    Table& t = it->second;
    Relation next = delta_apply(t.contents, d); // NotMinimal short-circuits here
    check_conforms(next, t.type, "table " + name);
    t.contents = std::move(next);
    t.index.clear();
}

void TableStore::replace(const std::string& name, Relation contents) {
    auto it = tables_.find(name);
    if (it == tables_.end()) fail(Err::UnknownTable, "unknown table '" + name + "'");
    check_conforms(contents, it->second.type, "table " + name);
    it->second.contents = std::move(contents);
    it->second.index.clear();
}

void TableStore::start_recording() { recording_ = true; }
void TableStore::stop_recording() { recording_ = false; }

void TableStore::reset_recording() {
    log_.clear();
    fetch_ns_ = 0;
}

SourceCursor TableStore::cursor_for(const SchemaType& source) const {
    if (source.is_leaf()) {
        if (source.table().empty()) fail(Err::Internal, "source leaf without a table name");
        std::string name = source.table();
        const TableStore* self = this;
        return SourceCursor::leaf([self, name](const PredPtr& p) { return self->fetch(name, p); });
    }
    return SourceCursor::node(cursor_for(source.left()), cursor_for(source.right()));
}

SchemaValue TableStore::source_value(const SchemaType& source) const {
    if (source.is_leaf()) return SchemaValue::leaf(fetch(source.table(), pred_true()));
    return SchemaValue::node(source_value(source.left()), source_value(source.right()));
}

} // namespace relens
