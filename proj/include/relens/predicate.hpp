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

#include <memory>
#include <optional>

#include "relens/relation.hpp"

namespace relens {

enum class CmpOp { Lt, Le, Gt, Ge, Ne };

const char* cmp_op_text(CmpOp op);

struct Predicate;
using PredPtr = std::shared_ptr<const Predicate>;

/// Predicate AST over records. `Joined` and `Projected` mirror the
/// relational operators at the predicate level and exist for lens typing;
/// a `Projected` node is evaluable only when it carries the drop lens's
/// default value for the dropped attribute.
struct Predicate {
    enum class Tag {
        True,
        Not,
        And,
        Or,
        AttrEqConst,
        AttrEqAttr,
        AttrCmp,
        TupleIn,
        Renamed,   // predicate over U[from/to], evaluated by renaming back
        Joined,    // P over U and Q over V, evaluated on U ∪ V records
        Projected, // π of a predicate onto a smaller domain
    };

    Tag tag = Tag::True;
    PredPtr a, b;
    std::string attr, attr2;             // AttrEqConst/AttrEqAttr/AttrCmp; Renamed from/to
    CmpOp op = CmpOp::Lt;
    Value value;                         // AttrEqConst/AttrCmp
    Relation rel;                        // TupleIn
    AttrSet attrs;                       // TupleIn X; Joined U; Projected kept attrs
    AttrSet attrs2;                      // Joined V
    std::string proj_attr;               // Projected: the dropped attribute
    std::optional<Value> proj_default;   // Projected: default used for evaluation
};

PredPtr pred_true();
PredPtr pred_not(PredPtr p);
PredPtr pred_false(); // Not(True)
PredPtr pred_and(PredPtr a, PredPtr b);
PredPtr pred_or(PredPtr a, PredPtr b);
PredPtr pred_eq(std::string attr, Value v);
PredPtr pred_attr_eq(std::string a, std::string b);
PredPtr pred_cmp(std::string attr, CmpOp op, Value v);
/// X ∈ M; the relation's domain must equal the attribute list.
PredPtr pred_in(AttrSet attrs, Relation m);
PredPtr pred_renamed(std::string from, std::string to, PredPtr p);
PredPtr pred_joined(PredPtr p, AttrSet u, PredPtr q, AttrSet v);
PredPtr pred_projected(PredPtr p, AttrSet kept, std::string dropped,
                       std::optional<Value> dflt);

bool pred_is_true(const PredPtr& p);

/// Evaluate on a record / on a positional row of a relation domain.
bool pred_eval(const PredPtr& p, const Record& m);
bool pred_eval(const PredPtr& p, const AttrSet& domain, const Row& row);

/// Attributes mentioned by the predicate (renames pushed through).
AttrSet pred_attrs(const PredPtr& p);

/// Sound syntactic check: true only if no attribute of `attrs` occurs in
/// the predicate, which guarantees evaluation is insensitive to them.
bool pred_ignores(const PredPtr& p, const AttrSet& attrs);

/// Structural substitution of attribute `from` by `to`.
PredPtr pred_rename_subst(const PredPtr& p, const std::string& from, const std::string& to);

/// Weakest/strongest predicates over `attrs` implied by / implying `p`;
/// used to push selections through joins. weaken(p) is implied by p;
/// strengthen(p) implies p.
PredPtr pred_weaken_to(const PredPtr& p, const AttrSet& attrs);
PredPtr pred_strengthen_to(const PredPtr& p, const AttrSet& attrs);

std::string pred_to_string(const PredPtr& p);

Relation rel_select(const PredPtr& p, const Relation& m);

} // namespace relens
