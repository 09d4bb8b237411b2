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
#include "relens/sql.hpp"

#include <algorithm>
#include <unordered_map>

namespace relens {

std::string sql_literal(const Value& v) {
    switch (v.kind()) {
    case Kind::Int: return std::to_string(v.as_int());
    case Kind::Bool: return v.as_bool() ? "TRUE" : "FALSE";
    case Kind::Str: {
        std::string out = "'";
        for (char c : v.as_str()) {
            if (c == '\'') out += '\'';
            out += c;
        }
        return out + "'";
    }
    }
    return "";
}

std::string sql_where(const PredPtr& p) {
    switch (p->tag) {
    case Predicate::Tag::True: return "TRUE";
    case Predicate::Tag::Not: return "NOT (" + sql_where(p->a) + ")";
    case Predicate::Tag::And: return "(" + sql_where(p->a) + ") AND (" + sql_where(p->b) + ")";
    case Predicate::Tag::Or: return "(" + sql_where(p->a) + ") OR (" + sql_where(p->b) + ")";
    case Predicate::Tag::AttrEqConst: return p->attr + " = " + sql_literal(p->value);
    case Predicate::Tag::AttrEqAttr: return p->attr + " = " + p->attr2;
    case Predicate::Tag::AttrCmp:
        return p->attr + " " + cmp_op_text(p->op) + " " + sql_literal(p->value);
    case Predicate::Tag::TupleIn: {
        if (p->rel.empty_rows()) return "FALSE";
        if (p->attrs.size() == 1) {
            std::string out = p->attrs[0] + " IN (";
            for (size_t i = 0; i < p->rel.rows().size(); ++i)
                out += (i ? ", " : "") + sql_literal(p->rel.rows()[i][0]);
            return out + ")";
        }
        // Multi-column membership as a disjunction of conjunctions.
        std::string out;
        for (size_t r = 0; r < p->rel.rows().size(); ++r) {
            std::string conj;
            for (size_t c = 0; c < p->attrs.size(); ++c) {
                if (c) conj += " AND ";
                conj += p->attrs[c] + " = " + sql_literal(p->rel.rows()[r][c]);
            }
            out += (r ? " OR " : "") + ("(" + conj + ")");
        }
        return out;
    }
    case Predicate::Tag::Renamed:
    case Predicate::Tag::Joined:
    case Predicate::Tag::Projected:
        fail(Err::Unrenderable, "predicate constructor has no SQL form");
    }
    fail(Err::Internal, "bad predicate tag");
}

namespace {

std::string column_list(const AttrSet& attrs) {
    std::string out;
    for (size_t i = 0; i < attrs.size(); ++i) out += (i ? ", " : "") + attrs[i];
    return out;
}

std::string key_where(const AttrSet& keys, const Relation& rel, const Row& row) {
    std::string out;
    bool first = true;
    for (const auto& k : keys) {
        if (!first) out += " AND ";
        first = false;
        out += k + " = " + sql_literal(row[rel.index_of_checked(k)]);
    }
    return out;
}

std::string value_list(const Row& row) {
    std::string out;
    for (size_t i = 0; i < row.size(); ++i) out += (i ? ", " : "") + sql_literal(row[i]);
    return out;
}

Row key_of(const AttrSet& keys, const Relation& rel, const Row& row) {
    Row k;
    k.reserve(keys.size());
    for (const auto& a : keys) k.push_back(row[rel.index_of_checked(a)]);
    return k;
}

} // namespace

std::vector<SqlStatement> sql_dml(const std::string& table, const AttrSet& keys,
                                  const DeltaRelation& d) {
    AttrSet effective = keys.empty() ? d.domain() : keys;
    if (!attrs_subset(effective, d.domain()))
        fail(Err::Internal, "key columns missing from the delta domain");
    AttrSet non_key = attrs_minus(d.domain(), effective);

    std::unordered_map<Row, const Row*, RowHash> added;
    added.reserve(d.plus().size());
    for (const auto& r : d.plus().rows()) {
        auto [it, inserted] = added.emplace(key_of(effective, d.plus(), r), &r);
        if (!inserted)
            fail(Err::KeyCollision, "two inserted rows share the key (" +
                                        value_list(it->first) + ") in table " + table);
    }
    std::unordered_map<Row, const Row*, RowHash> removed;
    removed.reserve(d.minus().size());
    for (const auto& r : d.minus().rows()) {
        auto [it, inserted] = removed.emplace(key_of(effective, d.minus(), r), &r);
        if (!inserted)
            fail(Err::KeyCollision, "two deleted rows share the key (" +
                                        value_list(it->first) + ") in table " + table);
    }

    std::vector<SqlStatement> deletes, updates, inserts;
    for (const auto& r : d.minus().rows()) {
        Row key = key_of(effective, d.minus(), r);
        if (added.count(key)) continue; // pairs into an UPDATE
        deletes.push_back(SqlStatement{
            StmtKind::Delete,
            "DELETE FROM " + table + " WHERE " + key_where(effective, d.minus(), r) + ";"});
    }
    for (const auto& r : d.plus().rows()) {
        Row key = key_of(effective, d.plus(), r);
        auto old = removed.find(key);
        if (old != removed.end() && !non_key.empty()) {
            std::string sets;
            bool first = true;
            for (const auto& c : non_key) {
                if (!first) sets += ", ";
                first = false;
                sets += c + " = " + sql_literal(r[d.plus().index_of_checked(c)]);
            }
            updates.push_back(SqlStatement{StmtKind::Update,
                                           "UPDATE " + table + " SET " + sets + " WHERE " +
                                               key_where(effective, d.plus(), r) + ";"});
        } else {
            inserts.push_back(SqlStatement{StmtKind::Insert,
                                           "INSERT INTO " + table + " (" +
                                               column_list(d.domain()) + ") VALUES (" +
                                               value_list(r) + ");"});
        }
    }
    // Rows are already in canonical order, and the key columns prefix the
    // ordering only if they sort first; sort statement groups by text for
    // a stable output.
    auto by_text = [](const SqlStatement& a, const SqlStatement& b) { return a.text < b.text; };
    std::sort(deletes.begin(), deletes.end(), by_text);
    std::sort(updates.begin(), updates.end(), by_text);
    std::sort(inserts.begin(), inserts.end(), by_text);

    std::vector<SqlStatement> out;
    out.insert(out.end(), deletes.begin(), deletes.end());
    out.insert(out.end(), updates.begin(), updates.end());
    out.insert(out.end(), inserts.begin(), inserts.end());
    return out;
}

std::vector<SqlStatement> sql_naive_dml(const std::string& table, const Relation& new_contents) {
    std::vector<SqlStatement> out;
    out.push_back(SqlStatement{StmtKind::Delete, "DELETE FROM " + table + ";"});
    for (const auto& r : new_contents.rows())
        out.push_back(SqlStatement{StmtKind::Insert,
                                   "INSERT INTO " + table + " (" +
                                       column_list(new_contents.domain()) + ") VALUES (" +
                                       value_list(r) + ");"});
    return out;
}

std::string sql_script(const std::vector<SqlStatement>& statements) {
    std::string out;
    for (const auto& s : statements) out += s.text + "\n";
    return out;
}

} // namespace relens
