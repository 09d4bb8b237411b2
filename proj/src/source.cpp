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
#include "relens/source.hpp"

namespace relens {

SourceCursor SourceCursor::leaf(Fetcher f) {
    SourceCursor c;
    c.fetch_ = std::make_shared<Fetcher>(std::move(f));
    return c;
}

SourceCursor SourceCursor::node(SourceCursor left, SourceCursor right) {
    SourceCursor c;
    c.left_ = std::make_shared<SourceCursor>(std::move(left));
    c.right_ = std::make_shared<SourceCursor>(std::move(right));
    return c;
}

SourceCursor SourceCursor::of_value(const SchemaValue& v) {
    if (v.is_leaf()) {
        Relation rel = v.rel();
        return leaf([rel](const PredPtr& p) { return rel_select(p, rel); });
    }
    return node(of_value(v.left()), of_value(v.right()));
}

Relation SourceCursor::fetch(const PredPtr& p) const {
    if (!fetch_) fail(Err::Internal, "fetch on a non-leaf source cursor");
    return (*fetch_)(p);
}

const SourceCursor& SourceCursor::left() const {
    if (!left_) fail(Err::Internal, "source cursor is not a node");
    return *left_;
}

const SourceCursor& SourceCursor::right() const {
    if (!right_) fail(Err::Internal, "source cursor is not a node");
    return *right_;
}

} // namespace relens
