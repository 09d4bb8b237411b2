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
#include "relens/predicate.hpp"

#include <algorithm>

namespace relens {

const char* cmp_op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Ne: return "<>";
    }
    return "?";
}

namespace {
std::shared_ptr<Predicate> make(Predicate::Tag tag) {
    auto p = std::make_shared<Predicate>();
    p->tag = tag;
    return p;
}
} // namespace

PredPtr pred_true() {
    static PredPtr t = make(Predicate::Tag::True);
    return t;
}

bool pred_is_true(const PredPtr& p) { return p->tag == Predicate::Tag::True; }

PredPtr pred_not(PredPtr p) {
    // Double negation folds away.
    if (p->tag == Predicate::Tag::Not) return p->a;
    auto out = make(Predicate::Tag::Not);
    out->a = std::move(p);
    return out;
}

PredPtr pred_false() { return pred_not(pred_true()); }

PredPtr pred_and(PredPtr a, PredPtr b) {
    if (pred_is_true(a)) return b;
    if (pred_is_true(b)) return a;
    auto out = make(Predicate::Tag::And);
    out->a = std::move(a);
    out->b = std::move(b);
    return out;
}

PredPtr pred_or(PredPtr a, PredPtr b) {
    if (pred_is_true(a)) return a;
    if (pred_is_true(b)) return b;
    auto out = make(Predicate::Tag::Or);
    out->a = std::move(a);
    out->b = std::move(b);
    return out;
}

PredPtr pred_eq(std::string attr, Value v) {
    auto out = make(Predicate::Tag::AttrEqConst);
    out->attr = std::move(attr);
    out->value = std::move(v);
    return out;
}

PredPtr pred_attr_eq(std::string a, std::string b) {
    auto out = make(Predicate::Tag::AttrEqAttr);
    out->attr = std::move(a);
    out->attr2 = std::move(b);
    return out;
}

PredPtr pred_cmp(std::string attr, CmpOp op, Value v) {
    auto out = make(Predicate::Tag::AttrCmp);
    out->attr = std::move(attr);
    out->op = op;
    out->value = std::move(v);
    return out;
}

PredPtr pred_in(AttrSet attrs, Relation m) {
    if (m.domain() != attrs)
        fail(Err::DomainMismatch, "tuple-membership relation domain must equal the attribute list");
    auto out = make(Predicate::Tag::TupleIn);
    out->attrs = std::move(attrs);
    out->rel = std::move(m);
    return out;
}

PredPtr pred_renamed(std::string from, std::string to, PredPtr p) {
    auto out = make(Predicate::Tag::Renamed);
    out->attr = std::move(from);
    out->attr2 = std::move(to);
    out->a = std::move(p);
    return out;
}

PredPtr pred_joined(PredPtr p, AttrSet u, PredPtr q, AttrSet v) {
    if (pred_is_true(p) && pred_is_true(q)) return pred_true();
    auto out = make(Predicate::Tag::Joined);
    out->a = std::move(p);
    out->b = std::move(q);
    out->attrs = std::move(u);
    out->attrs2 = std::move(v);
    return out;
}

PredPtr pred_projected(PredPtr p, AttrSet kept, std::string dropped,
                       std::optional<Value> dflt) {
    if (pred_is_true(p)) return pred_true();
    auto out = make(Predicate::Tag::Projected);
    out->a = std::move(p);
    out->attrs = std::move(kept);
    out->proj_attr = std::move(dropped);
    out->proj_default = std::move(dflt);
    return out;
}

namespace {

// Evaluation core, parameterized over attribute lookup. `lookup` throws
// MissingAttribute for absent names; `as_record` materializes the full
// record for the structural (Renamed/Joined/Projected) cases.
template <typename Lookup, typename AsRecord>
bool eval_core(const PredPtr& p, const Lookup& lookup, const AsRecord& as_record) {
    switch (p->tag) {
    case Predicate::Tag::True: return true;
    case Predicate::Tag::Not: return !eval_core(p->a, lookup, as_record);
    case Predicate::Tag::And:
        return eval_core(p->a, lookup, as_record) && eval_core(p->b, lookup, as_record);
    case Predicate::Tag::Or:
        return eval_core(p->a, lookup, as_record) || eval_core(p->b, lookup, as_record);
    case Predicate::Tag::AttrEqConst: {
        const Value& v = lookup(p->attr);
        return v.compare(p->value) == 0;
    }
    case Predicate::Tag::AttrEqAttr: {
        const Value& x = lookup(p->attr);
        const Value& y = lookup(p->attr2);
        return x.compare(y) == 0;
    }
    case Predicate::Tag::AttrCmp: {
        int c = lookup(p->attr).compare(p->value);
        switch (p->op) {
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
        case CmpOp::Ne: return c != 0;
        }
        return false;
    }
    case Predicate::Tag::TupleIn: {
        Row key;
        key.reserve(p->attrs.size());
        for (const auto& a : p->attrs) key.push_back(lookup(a));
        return p->rel.contains(key);
    }
    case Predicate::Tag::Renamed: {
        // Predicate over U[from/to]; evaluate the inner predicate on the
        // record with `to` renamed back to `from`.
        Record m = as_record();
        return pred_eval(p->a, m.rename(p->attr2, p->attr));
    }
    case Predicate::Tag::Joined: {
        Record m = as_record();
        return pred_eval(p->a, m.project(p->attrs)) && pred_eval(p->b, m.project(p->attrs2));
    }
    case Predicate::Tag::Projected: {
        if (!p->proj_default)
            fail(Err::Unevaluable, "projected predicate without a default value");
        Record m = as_record();
        Record completed = m.update(Record{{p->proj_attr, *p->proj_default}});
        return pred_eval(p->a, completed);
    }
    }
    fail(Err::Internal, "bad predicate tag");
}

} // namespace

bool pred_eval(const PredPtr& p, const Record& m) {
    auto lookup = [&](const std::string& a) -> const Value& { return m.get(a); };
    auto as_record = [&]() -> Record { return m; };
    return eval_core(p, lookup, as_record);
}

bool pred_eval(const PredPtr& p, const AttrSet& domain, const Row& row) {
    auto lookup = [&](const std::string& a) -> const Value& {
        auto it = std::lower_bound(domain.begin(), domain.end(), a);
        if (it == domain.end() || *it != a)
            fail(Err::MissingAttribute, "record has no attribute '" + a + "'");
        return row[static_cast<size_t>(it - domain.begin())];
    };
    auto as_record = [&]() -> Record {
        std::vector<std::pair<std::string, Value>> fields;
        fields.reserve(domain.size());
        for (size_t i = 0; i < domain.size(); ++i) fields.emplace_back(domain[i], row[i]);
        return Record::from_fields(std::move(fields));
    };
    return eval_core(p, lookup, as_record);
}

namespace {
void collect_attrs(const PredPtr& p, std::vector<std::string>& out) {
    switch (p->tag) {
    case Predicate::Tag::True: return;
    case Predicate::Tag::Not: collect_attrs(p->a, out); return;
    case Predicate::Tag::And:
    case Predicate::Tag::Or:
        collect_attrs(p->a, out);
        collect_attrs(p->b, out);
        return;
    case Predicate::Tag::AttrEqConst:
    case Predicate::Tag::AttrCmp: out.push_back(p->attr); return;
    case Predicate::Tag::AttrEqAttr:
        out.push_back(p->attr);
        out.push_back(p->attr2);
        return;
    case Predicate::Tag::TupleIn:
        out.insert(out.end(), p->attrs.begin(), p->attrs.end());
        return;
    case Predicate::Tag::Renamed: {
        // Push the rename: the outer predicate reads `to` where the inner
        // one reads `from`.
        AttrSet inner = pred_attrs(p->a);
        for (const auto& a : inner) out.push_back(a == p->attr ? p->attr2 : a);
        return;
    }
    case Predicate::Tag::Joined:
        collect_attrs(p->a, out);
        collect_attrs(p->b, out);
        return;
    case Predicate::Tag::Projected: {
        AttrSet inner = pred_attrs(p->a);
        for (const auto& a : inner)
            if (attrs_contains(p->attrs, a)) out.push_back(a);
        return;
    }
    }
}
} // namespace

AttrSet pred_attrs(const PredPtr& p) {
    std::vector<std::string> out;
    collect_attrs(p, out);
    return attrs_sorted(std::move(out));
}

bool pred_ignores(const PredPtr& p, const AttrSet& attrs) {
    AttrSet mentioned = pred_attrs(p);
    return attrs_intersect(mentioned, attrs).empty();
}

PredPtr pred_rename_subst(const PredPtr& p, const std::string& from, const std::string& to) {
    auto ren = [&](const std::string& a) { return a == from ? to : a; };
    switch (p->tag) {
    case Predicate::Tag::True: return p;
    case Predicate::Tag::Not: return pred_not(pred_rename_subst(p->a, from, to));
    case Predicate::Tag::And:
        return pred_and(pred_rename_subst(p->a, from, to), pred_rename_subst(p->b, from, to));
    case Predicate::Tag::Or:
        return pred_or(pred_rename_subst(p->a, from, to), pred_rename_subst(p->b, from, to));
    case Predicate::Tag::AttrEqConst: return pred_eq(ren(p->attr), p->value);
    case Predicate::Tag::AttrEqAttr: return pred_attr_eq(ren(p->attr), ren(p->attr2));
    case Predicate::Tag::AttrCmp: return pred_cmp(ren(p->attr), p->op, p->value);
    case Predicate::Tag::TupleIn: {
        if (!attrs_contains(p->attrs, from)) return p;
        return pred_in(attrs_rename(p->attrs, from, to), rel_rename(p->rel, from, to));
    }
    case Predicate::Tag::Renamed:
        // Expand the symbolic rename structurally, then substitute.
        return pred_rename_subst(pred_rename_subst(p->a, p->attr, p->attr2), from, to);
    case Predicate::Tag::Joined:
        return pred_joined(pred_rename_subst(p->a, from, to),
                           attrs_contains(p->attrs, from) ? attrs_rename(p->attrs, from, to)
                                                          : p->attrs,
                           pred_rename_subst(p->b, from, to),
                           attrs_contains(p->attrs2, from) ? attrs_rename(p->attrs2, from, to)
                                                           : p->attrs2);
    case Predicate::Tag::Projected:
        return pred_projected(pred_rename_subst(p->a, from, to),
                              attrs_contains(p->attrs, from) ? attrs_rename(p->attrs, from, to)
                                                             : p->attrs,
                              p->proj_attr == from ? to : p->proj_attr, p->proj_default);
    }
    fail(Err::Internal, "bad predicate tag");
}

namespace {

// Mutually recursive weakening/strengthening to a target attribute set.
// weaken(p) is implied by p on any record extending the target domain;
// strengthen(p) implies p. Atoms fully inside the target set pass through;
// foreign atoms become True when weakening and False when strengthening,
// with Not flipping the direction.
PredPtr approx_to(const PredPtr& p, const AttrSet& attrs, bool weaken) {
    PredPtr boundary = weaken ? pred_true() : pred_false();
    switch (p->tag) {
    case Predicate::Tag::True: return pred_true();
    case Predicate::Tag::Not: return pred_not(approx_to(p->a, attrs, !weaken));
    case Predicate::Tag::And:
        return pred_and(approx_to(p->a, attrs, weaken), approx_to(p->b, attrs, weaken));
    case Predicate::Tag::Or:
        return pred_or(approx_to(p->a, attrs, weaken), approx_to(p->b, attrs, weaken));
    case Predicate::Tag::AttrEqConst:
    case Predicate::Tag::AttrCmp:
        return attrs_contains(attrs, p->attr) ? p : boundary;
    case Predicate::Tag::AttrEqAttr:
        return (attrs_contains(attrs, p->attr) && attrs_contains(attrs, p->attr2)) ? p : boundary;
    case Predicate::Tag::TupleIn: {
        if (attrs_subset(p->attrs, attrs)) return p;
        if (!weaken) return boundary;
        AttrSet kept = attrs_intersect(p->attrs, attrs);
        if (kept.empty()) return boundary;
        return pred_in(kept, rel_project(p->rel, kept));
    }
    case Predicate::Tag::Renamed:
        return approx_to(pred_rename_subst(p->a, p->attr, p->attr2), attrs, weaken);
    case Predicate::Tag::Joined:
        if (attrs_subset(pred_attrs(p), attrs)) return p;
        return pred_and(approx_to(p->a, attrs, weaken), approx_to(p->b, attrs, weaken));
    case Predicate::Tag::Projected: {
        if (attrs_subset(pred_attrs(p), attrs)) return p;
        // Constraints on the dropped attribute vanish; the rest of the
        // inner predicate approximates the projection soundly only in the
        // weakening direction.
        if (weaken) return approx_to(p->a, attrs, weaken);
        return boundary;
    }
    }
    fail(Err::Internal, "bad predicate tag");
}

} // namespace

PredPtr pred_weaken_to(const PredPtr& p, const AttrSet& attrs) { return approx_to(p, attrs, true); }

PredPtr pred_strengthen_to(const PredPtr& p, const AttrSet& attrs) {
    return approx_to(p, attrs, false);
}

std::string pred_to_string(const PredPtr& p) {
    switch (p->tag) {
    case Predicate::Tag::True: return "true";
    case Predicate::Tag::Not: return "not (" + pred_to_string(p->a) + ")";
    case Predicate::Tag::And:
        return "(" + pred_to_string(p->a) + ") and (" + pred_to_string(p->b) + ")";
    case Predicate::Tag::Or:
        return "(" + pred_to_string(p->a) + ") or (" + pred_to_string(p->b) + ")";
    case Predicate::Tag::AttrEqConst: return p->attr + " = " + p->value.to_literal();
    case Predicate::Tag::AttrEqAttr: return p->attr + " = " + p->attr2;
    case Predicate::Tag::AttrCmp:
        return p->attr + " " + cmp_op_text(p->op) + " " + p->value.to_literal();
    case Predicate::Tag::TupleIn: {
        std::string s = "(";
        for (size_t i = 0; i < p->attrs.size(); ++i) s += (i ? ", " : "") + p->attrs[i];
        s += ") in " + p->rel.to_string();
        return s;
    }
    case Predicate::Tag::Renamed:
        return "rename[" + p->attr + "/" + p->attr2 + "](" + pred_to_string(p->a) + ")";
    case Predicate::Tag::Joined:
        return "(" + pred_to_string(p->a) + ") join (" + pred_to_string(p->b) + ")";
    case Predicate::Tag::Projected:
        return "proj[-" + p->proj_attr + "](" + pred_to_string(p->a) + ")";
    }
    return "?";
}

Relation rel_select(const PredPtr& p, const Relation& m) {
    if (pred_is_true(p)) return m;
    std::vector<Row> rows;
    for (const auto& r : m.rows())
        if (pred_eval(p, m.domain(), r)) rows.push_back(r);
    return Relation::from_sorted_rows(m.domain(), std::move(rows));
}

} // namespace relens
