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

#include <optional>
#include <vector>

#include "relens/record.hpp"

namespace relens {

using Row = std::vector<Value>;

int row_compare(const Row& a, const Row& b);

struct RowHash {
    size_t operator()(const Row& r) const {
        size_t h = 0xcbf29ce484222325ULL;
        for (const auto& v : r) h = h * 0x100000001b3ULL ^ v.hash();
        return h;
    }
};

/// A relation: a duplicate-free set of records over one attribute domain.
/// Rows are stored positionally against the sorted domain and kept in a
/// canonical sorted order, so equality, diffing and file output are
/// deterministic.
class Relation {
public:
    Relation() = default;

    static Relation empty(AttrSet domain);
    /// Sorts, deduplicates, and checks row arity.
    static Relation from_rows(AttrSet domain, std::vector<Row> rows);
    /// Rows already sorted and unique; checked in debug only.
    static Relation from_sorted_rows(AttrSet domain, std::vector<Row> rows);
    static Relation from_records(const std::vector<Record>& records);

    const AttrSet& domain() const { return domain_; }
    const std::vector<Row>& rows() const { return rows_; }
    size_t size() const { return rows_.size(); }
    bool empty_rows() const { return rows_.empty(); }

    std::optional<size_t> index_of(const std::string& attr) const;
    size_t index_of_checked(const std::string& attr) const; // throws MissingAttribute

    bool contains(const Row& row) const;
    Record record_at(size_t i) const;
    std::vector<Record> records() const;

    bool operator==(const Relation& other) const {
        return domain_ == other.domain_ && rows_ == other.rows_;
    }
    bool operator!=(const Relation& other) const { return !(*this == other); }

    std::string to_string() const;

private:
    AttrSet domain_;
    std::vector<Row> rows_;
};

/// Set-algebra over relations; all require equal domains where noted.
Relation rel_union(const Relation& m, const Relation& n);
Relation rel_difference(const Relation& m, const Relation& n);
Relation rel_intersect(const Relation& m, const Relation& n);
bool rel_subset(const Relation& m, const Relation& n);

/// Projection to `attrs` (must be a subset of the domain); collapses
/// duplicates.
Relation rel_project(const Relation& m, const AttrSet& attrs);

/// Natural join; shared attributes are the join key, disjoint domains give
/// the cartesian product.
Relation rel_join(const Relation& m, const Relation& n);

/// Rename attribute `from` (present) to `to` (absent).
Relation rel_rename(const Relation& m, const std::string& from, const std::string& to);

} // namespace relens
