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

#include "relens/schema.hpp"

namespace relens {

/// How delta-put reaches source data: a tree of per-relation fetchers
/// mirroring the source schema. A fetcher answers σ_P requests; backends
/// record the predicates they are asked for, which keeps the propagation
/// honest about how much data it touches.
class SourceCursor {
public:
    using Fetcher = std::function<Relation(const PredPtr&)>;

    static SourceCursor leaf(Fetcher f);
    static SourceCursor node(SourceCursor left, SourceCursor right);

    /// In-memory sources backed by a schema value.
    static SourceCursor of_value(const SchemaValue& v);

    bool is_leaf() const { return fetch_ != nullptr; }
    Relation fetch(const PredPtr& p) const;
    const SourceCursor& left() const;
    const SourceCursor& right() const;

private:
    std::shared_ptr<Fetcher> fetch_;
    std::shared_ptr<SourceCursor> left_, right_;
};

} // namespace relens
