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

#include <unordered_map>

#include "relens/lens.hpp"

namespace relens {

/// One σ_P request answered by the store.
struct FetchRecord {
    std::string table;
    PredPtr pred;
};

/// In-memory table store. Answers selective fetches (using lazily built
/// per-attribute hash indexes where the predicate allows), applies minimal
/// deltas transactionally against the declared relation types, and can
/// record every fetch for query accounting.
///
/// Single logical writer: reads may be shared, but callers serialize
/// mutations.
class TableStore {
public:
    void create_table(const std::string& name, RelationType type, Relation contents);
    bool has_table(const std::string& name) const;
    std::vector<std::string> table_names() const;

    const RelationType& table_type(const std::string& name) const;
    const Relation& table_contents(const std::string& name) const;

    /// σ_P of the stored relation.
    Relation fetch(const std::string& name, const PredPtr& p) const;

    /// Replaces the stored relation with M ⊕ Δ; the delta must be minimal
    /// and the result must conform to the table type, otherwise nothing
    /// changes.
    void apply_delta(const std::string& name, const DeltaRelation& d);

    /// Wholesale replacement (used by the state-based put path); the new
    /// contents must conform.
    void replace(const std::string& name, Relation contents);

    // -- fetch recording ----------------------------------------------------
    void start_recording();
    void stop_recording();
    const std::vector<FetchRecord>& recorded() const { return log_; }
    size_t fetch_count() const { return log_.size(); }
    /// Nanoseconds spent inside fetch while recording.
    int64_t fetch_time_ns() const { return fetch_ns_; }
    void reset_recording();

    /// Cursor over the base tables named by a lens source schema.
    SourceCursor cursor_for(const SchemaType& source) const;
    /// Materialized values of those tables (records fetches).
    SchemaValue source_value(const SchemaType& source) const;

private:
    struct Table {
        RelationType type;
        Relation contents;
        // attr -> value -> row indexes; built on demand, dropped on write.
        mutable std::unordered_map<std::string,
                                   std::unordered_map<Value, std::vector<size_t>, ValueHash>>
            index;
    };

    const Table& table(const std::string& name) const;
    Relation run_fetch(const Table& t, const PredPtr& p) const;

    std::map<std::string, Table> tables_;
    mutable bool recording_ = false;
    mutable std::vector<FetchRecord> log_;
    mutable int64_t fetch_ns_ = 0;
};

} // namespace relens
