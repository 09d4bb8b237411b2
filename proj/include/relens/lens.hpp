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

#include "relens/query.hpp"
#include "relens/source.hpp"

namespace relens {

enum class LensOp { Base, Select, Drop, Join, Rename, Id, Compose, Sym, Assoc, Tensor };

enum class JoinVariant { DeleteLeft, DeleteRight, DeleteBoth };

struct LensExpr;
using LensPtr = std::shared_ptr<const LensExpr>;

/// Untyped lens syntax. Primitives carry their sublenses; the generic
/// combinators (id, compose, sym, assoc, tensor) plumb schema trees.
struct LensExpr {
    LensOp op = LensOp::Id;
    std::string table;          // Base
    PredPtr pred;               // Select
    std::string drop_attr;      // Drop: the removed attribute
    AttrSet drop_det;           // Drop: determining attributes X
    Value drop_default;         // Drop: default for inserted rows
    std::string ren_from, ren_to;
    JoinVariant join_variant = JoinVariant::DeleteLeft;
    std::vector<LensPtr> kids;
};

LensPtr l_base(std::string table);
LensPtr l_select(PredPtr pred, LensPtr sub);
LensPtr l_drop(std::string attr, AttrSet determined_by, Value dflt, LensPtr sub);
LensPtr l_join(LensPtr left, LensPtr right, JoinVariant variant = JoinVariant::DeleteLeft);
LensPtr l_rename(std::string from, std::string to, LensPtr sub);
LensPtr l_id();
LensPtr l_compose(LensPtr first, LensPtr second);
LensPtr l_sym();
LensPtr l_assoc();
LensPtr l_tensor(LensPtr left, LensPtr right);

struct LensNode;

/// A typechecked lens with its source and view schema types. Cheap to
/// copy; the tree is immutable and shared.
class TypedLens {
public:
    TypedLens() = default;
    explicit TypedLens(std::shared_ptr<const LensNode> node) : node_(std::move(node)) {}

    const LensNode& n() const;
    LensOp op() const;
    const SchemaType& source() const;
    const SchemaType& view() const;

private:
    std::shared_ptr<const LensNode> node_;
};

struct LensNode {
    LensOp op = LensOp::Id;
    std::string table;
    PredPtr pred;
    std::string drop_attr;
    Value drop_default;
    FunDep drop_dep;      // X -> A split off the source dependencies
    FunDepSet drop_rest;  // remaining dependencies F'
    std::string ren_from, ren_to;
    std::vector<TypedLens> kids;
    SchemaType source, view;
};

/// Typecheck a lens expression against an explicit source schema, or
/// against a catalog of base-table types (the source schema is then the
/// tensor tree induced by the expression). Enforces linear use of base
/// tables and the per-primitive typing side conditions.
TypedLens lens_build(const LensPtr& expr, const SchemaType& source);
TypedLens lens_build(const LensPtr& expr, const std::map<std::string, RelationType>& tables);

SchemaValue lens_get(const TypedLens& lens, const SchemaValue& source);
SchemaValue lens_get(const TypedLens& lens, const SourceCursor& source);

/// State-based put. Checks that the view conforms to the view type before
/// propagating; the result satisfies PutGet and GetPut for well-typed
/// lenses.
SchemaValue lens_put_naive(const TypedLens& lens, const SchemaValue& source,
                           const SchemaValue& view);

/// The original put for the drop lens (insert-aware join with the source
/// before revision); equivalent to the simplified definition used by
/// lens_put_naive. The lens must be a Drop.
SchemaValue lens_put_drop_bohannon(const TypedLens& lens, const SchemaValue& source,
                                   const SchemaValue& view);

struct DeltaPutOptions {
    /// Validate minimality of the view delta and conformance of the
    /// updated view before propagating. When `current_view` is provided
    /// the validation is pure; otherwise the view is materialized through
    /// the source cursor first.
    bool validate = true;
    const SchemaValue* current_view = nullptr;
};

/// Incremental put: translates a minimal view delta into a minimal source
/// delta satisfying ΔPutGet. Auxiliary source data is fetched through the
/// cursor with selective predicates only.
SchemaDelta lens_delta_put(const TypedLens& lens, const SourceCursor& source,
                           const SchemaDelta& view_delta, const DeltaPutOptions& opts = {});

/// Incremental get (view maintenance): delta-correct with respect to
/// lens_get.
SchemaDelta lens_delta_get(const TypedLens& lens, const SchemaValue& source,
                           const SchemaDelta& source_delta);

/// The lens's get direction as a relational query over its base tables.
/// Fails for lenses whose view is a schema tree or whose leaves are not
/// named tables.
QueryPtr lens_get_query(const TypedLens& lens);

/// σ_P of the lens's view, computed by pushing the predicate down to the
/// source fetchers (through selects, drops, renames, and join sides).
Relation lens_view_fetch(const TypedLens& lens, const SourceCursor& source, const PredPtr& p);

/// Checks that `view_delta` is minimal for `view` and that the updated
/// view conforms to the lens's view type.
void lens_validate_view_update(const TypedLens& lens, const SchemaValue& view,
                               const SchemaDelta& view_delta);

/// Empty delta shaped like a schema type.
SchemaDelta schema_empty_delta_of(const SchemaType& t);

} // namespace relens
