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
#include "relens/lens.hpp"

#include <algorithm>

namespace relens {

namespace {
std::shared_ptr<LensExpr> make_expr(LensOp op) {
    auto e = std::make_shared<LensExpr>();
    e->op = op;
    return e;
}
} // namespace

LensPtr l_base(std::string table) {
    auto e = make_expr(LensOp::Base);
    e->table = std::move(table);
    return e;
}

LensPtr l_select(PredPtr pred, LensPtr sub) {
    auto e = make_expr(LensOp::Select);
    e->pred = std::move(pred);
    e->kids = {std::move(sub)};
    return e;
}

LensPtr l_drop(std::string attr, AttrSet determined_by, Value dflt, LensPtr sub) {
    auto e = make_expr(LensOp::Drop);
    e->drop_attr = std::move(attr);
    e->drop_det = std::move(determined_by);
    e->drop_default = std::move(dflt);
    e->kids = {std::move(sub)};
    return e;
}

LensPtr l_join(LensPtr left, LensPtr right, JoinVariant variant) {
    auto e = make_expr(LensOp::Join);
    e->join_variant = variant;
    e->kids = {std::move(left), std::move(right)};
    return e;
}

LensPtr l_rename(std::string from, std::string to, LensPtr sub) {
    auto e = make_expr(LensOp::Rename);
    e->ren_from = std::move(from);
    e->ren_to = std::move(to);
    e->kids = {std::move(sub)};
    return e;
}

LensPtr l_id() { return make_expr(LensOp::Id); }

LensPtr l_compose(LensPtr first, LensPtr second) {
    auto e = make_expr(LensOp::Compose);
    e->kids = {std::move(first), std::move(second)};
    return e;
}

LensPtr l_sym() { return make_expr(LensOp::Sym); }
LensPtr l_assoc() { return make_expr(LensOp::Assoc); }

LensPtr l_tensor(LensPtr left, LensPtr right) {
    auto e = make_expr(LensOp::Tensor);
    e->kids = {std::move(left), std::move(right)};
    return e;
}

const LensNode& TypedLens::n() const {
    if (!node_) fail(Err::Internal, "empty lens");
    return *node_;
}

LensOp TypedLens::op() const { return n().op; }
const SchemaType& TypedLens::source() const { return n().source; }
const SchemaType& TypedLens::view() const { return n().view; }

namespace {

TypedLens finish(LensNode node) {
    return TypedLens(std::make_shared<const LensNode>(std::move(node)));
}

const RelationType& leaf_view(const TypedLens& lens, const char* rule) {
    if (!lens.view().is_leaf())
        fail(Err::TypeError, std::string(rule) + ": operand view must be a single relation");
    return lens.view().rel();
}

TypedLens build(const LensPtr& expr, const SchemaType& source) {
    switch (expr->op) {
    case LensOp::Base: {
        if (!source.is_leaf() || source.table() != expr->table)
            fail(Err::TypeError, "base: source schema is not table '" + expr->table + "'");
        LensNode node;
        node.op = LensOp::Base;
        node.table = expr->table;
        node.source = source;
        node.view = source;
        return finish(node);
    }
    case LensOp::Id: {
        LensNode node;
        node.op = LensOp::Id;
        node.source = source;
        node.view = source;
        return finish(node);
    }
    case LensOp::Select: {
        TypedLens sub = build(expr->kids[0], source);
        const RelationType& vt = leaf_view(sub, "select");
        AttrSet mentioned = pred_attrs(expr->pred);
        if (!attrs_subset(mentioned, vt.attrs))
            fail(Err::TypeError, "select: predicate mentions attributes outside the view");
        RelationType out = vt;
        out.pred = pred_and(expr->pred, vt.pred);
        LensNode node;
        node.op = LensOp::Select;
        node.pred = expr->pred;
        node.kids = {sub};
        node.source = source;
        node.view = SchemaType::leaf(std::move(out));
        return finish(node);
    }
    case LensOp::Drop: {
        TypedLens sub = build(expr->kids[0], source);
        const RelationType& vt = leaf_view(sub, "drop");
        const std::string& a = expr->drop_attr;
        if (!attrs_contains(vt.attrs, a))
            fail(Err::TypeError, "drop: attribute '" + a + "' not in the view");
        auto [rest, dep] = [&] {
            try {
                return vt.fds.split_drop(a);
            } catch (const Error& e) {
                fail(Err::TypeError, std::string("drop: ") + e.what());
            }
        }();
        if (dep.lhs != expr->drop_det)
            fail(Err::TypeError, "drop: '" + a + "' is determined by {" +
                                     FunDep{dep.lhs, {a}}.to_string() +
                                     "}, not the declared attributes");
        if (!vt.types.empty() && vt.kind_of(a) != expr->drop_default.kind())
            fail(Err::TypeError, "drop: default value kind does not match column '" + a + "'");
        RelationType out;
        out.attrs = attrs_minus(vt.attrs, AttrSet{a});
        out.types = vt.types;
        out.types.erase(a);
        out.pred = pred_projected(vt.pred, out.attrs, a, expr->drop_default);
        out.fds = rest;
        out.keys = attrs_contains(vt.keys, a) ? AttrSet{} : vt.keys;
        LensNode node;
        node.op = LensOp::Drop;
        node.drop_attr = a;
        node.drop_default = expr->drop_default;
        node.drop_dep = dep;
        node.drop_rest = rest;
        node.kids = {sub};
        node.source = source;
        node.view = SchemaType::leaf(std::move(out));
        return finish(node);
    }
    case LensOp::Join: {
        if (expr->join_variant != JoinVariant::DeleteLeft)
            fail(Err::UnsupportedVariant, "only the delete-left join lens is supported");
        if (source.is_leaf())
            fail(Err::TypeError, "join: source schema must be a pair of schemas");
        TypedLens lhs = build(expr->kids[0], source.left());
        TypedLens rhs = build(expr->kids[1], source.right());
        const RelationType& lt = leaf_view(lhs, "join");
        const RelationType& rt = leaf_view(rhs, "join");
        for (const auto& shared : attrs_intersect(lt.attrs, rt.attrs)) {
            if (!lt.types.empty() && !rt.types.empty() &&
                lt.kind_of(shared) != rt.kind_of(shared))
                fail(Err::TypeError, "join: shared attribute '" + shared + "' has two types");
        }
        RelationType out;
        out.attrs = attrs_union(lt.attrs, rt.attrs);
        out.types = lt.types;
        out.types.insert(rt.types.begin(), rt.types.end());
        out.pred = pred_joined(lt.pred, lt.attrs, rt.pred, rt.attrs);
        try {
            out.fds = FunDepSet::merged(lt.fds, rt.fds);
        } catch (const Error& e) {
            fail(Err::TypeError, std::string("join: ") + e.what());
        }
        out.keys = (!lt.keys.empty() && !rt.keys.empty()) ? attrs_union(lt.keys, rt.keys)
                                                          : AttrSet{};
        LensNode node;
        node.op = LensOp::Join;
        node.kids = {lhs, rhs};
        node.source = source;
        node.view = SchemaType::leaf(std::move(out));
        return finish(node);
    }
    case LensOp::Rename: {
        TypedLens sub = build(expr->kids[0], source);
        const RelationType& vt = leaf_view(sub, "rename");
        if (!attrs_contains(vt.attrs, expr->ren_from))
            fail(Err::TypeError, "rename: attribute '" + expr->ren_from + "' not in the view");
        if (attrs_contains(vt.attrs, expr->ren_to))
            fail(Err::TypeError, "rename: attribute '" + expr->ren_to + "' already present");
        RelationType out;
        out.attrs = attrs_rename(vt.attrs, expr->ren_from, expr->ren_to);
        for (const auto& [k, v] : vt.types)
            out.types[k == expr->ren_from ? expr->ren_to : k] = v;
        out.pred = pred_rename_subst(vt.pred, expr->ren_from, expr->ren_to);
        out.fds = vt.fds.renamed(expr->ren_from, expr->ren_to);
        out.keys = attrs_rename(vt.keys, expr->ren_from, expr->ren_to);
        LensNode node;
        node.op = LensOp::Rename;
        node.ren_from = expr->ren_from;
        node.ren_to = expr->ren_to;
        node.kids = {sub};
        node.source = source;
        node.view = SchemaType::leaf(std::move(out));
        return finish(node);
    }
    case LensOp::Compose: {
        TypedLens first = build(expr->kids[0], source);
        TypedLens second = build(expr->kids[1], first.view());
        LensNode node;
        node.op = LensOp::Compose;
        node.kids = {first, second};
        node.source = source;
        node.view = second.view();
        return finish(node);
    }
    case LensOp::Sym: {
        if (source.is_leaf()) fail(Err::TypeError, "sym: source schema must be a pair");
        LensNode node;
        node.op = LensOp::Sym;
        node.source = source;
        node.view = SchemaType::node(source.right(), source.left());
        return finish(node);
    }
    case LensOp::Assoc: {
        if (source.is_leaf() || source.right().is_leaf())
            fail(Err::TypeError, "assoc: source schema must be shaped X ⊗ (Y ⊗ Z)");
        LensNode node;
        node.op = LensOp::Assoc;
        node.source = source;
        node.view = SchemaType::node(SchemaType::node(source.left(), source.right().left()),
                                     source.right().right());
        return finish(node);
    }
    case LensOp::Tensor: {
        if (source.is_leaf()) fail(Err::TypeError, "tensor: source schema must be a pair");
        TypedLens lhs = build(expr->kids[0], source.left());
        TypedLens rhs = build(expr->kids[1], source.right());
        LensNode node;
        node.op = LensOp::Tensor;
        node.kids = {lhs, rhs};
        node.source = source;
        node.view = SchemaType::node(lhs.view(), rhs.view());
        return finish(node);
    }
    }
    fail(Err::Internal, "bad lens op");
}

void check_linear(const TypedLens& lens) {
    std::vector<std::string> tables = lens.source().tables();
    std::sort(tables.begin(), tables.end());
    for (size_t i = 1; i < tables.size(); ++i)
        if (tables[i] == tables[i - 1])
            fail(Err::TypeError, "base table '" + tables[i] + "' used more than once");
}

SchemaType derive_source(const LensPtr& expr, const std::map<std::string, RelationType>& tables) {
    switch (expr->op) {
    case LensOp::Base: {
        auto it = tables.find(expr->table);
        if (it == tables.end()) fail(Err::UnknownTable, "unknown table '" + expr->table + "'");
        return SchemaType::leaf(it->second, expr->table);
    }
    case LensOp::Select:
    case LensOp::Drop:
    case LensOp::Rename: return derive_source(expr->kids[0], tables);
    case LensOp::Join:
    case LensOp::Tensor:
        return SchemaType::node(derive_source(expr->kids[0], tables),
                                derive_source(expr->kids[1], tables));
    case LensOp::Compose: return derive_source(expr->kids[0], tables);
    case LensOp::Id:
    case LensOp::Sym:
    case LensOp::Assoc:
        fail(Err::TypeError, "cannot infer a source schema for a bare combinator lens");
    }
    fail(Err::Internal, "bad lens op");
}

} // namespace

TypedLens lens_build(const LensPtr& expr, const SchemaType& source) {
    TypedLens lens = build(expr, source);
    check_linear(lens);
    return lens;
}

TypedLens lens_build(const LensPtr& expr, const std::map<std::string, RelationType>& tables) {
    return lens_build(expr, derive_source(expr, tables));
}

SchemaDelta schema_empty_delta_of(const SchemaType& t) {
    if (t.is_leaf()) return SchemaDelta::leaf(DeltaRelation::empty(t.rel().attrs));
    return SchemaDelta::node(schema_empty_delta_of(t.left()), schema_empty_delta_of(t.right()));
}

namespace {

Relation singleton_default(const std::string& attr, const Value& v) {
    return Relation::from_rows(AttrSet{attr}, {Row{v}});
}

// ---- get ----------------------------------------------------------------

SchemaValue get_rec(const TypedLens& lens, const SchemaValue& s) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base:
    case LensOp::Id: return s;
    case LensOp::Select:
        return SchemaValue::leaf(rel_select(n.pred, get_rec(n.kids[0], s).rel()));
    case LensOp::Drop:
        return SchemaValue::leaf(
            rel_project(get_rec(n.kids[0], s).rel(), lens.view().rel().attrs));
    case LensOp::Join:
        return SchemaValue::leaf(rel_join(get_rec(n.kids[0], s.left()).rel(),
                                          get_rec(n.kids[1], s.right()).rel()));
    case LensOp::Rename:
        return SchemaValue::leaf(rel_rename(get_rec(n.kids[0], s).rel(), n.ren_from, n.ren_to));
    case LensOp::Compose: return get_rec(n.kids[1], get_rec(n.kids[0], s));
    case LensOp::Sym: return SchemaValue::node(s.right(), s.left());
    case LensOp::Assoc:
        return SchemaValue::node(SchemaValue::node(s.left(), s.right().left()),
                                 s.right().right());
    case LensOp::Tensor:
        return SchemaValue::node(get_rec(n.kids[0], s.left()), get_rec(n.kids[1], s.right()));
    }
    fail(Err::Internal, "bad lens op");
}

// ---- predicate-pushdown fetch --------------------------------------------

SourceCursor make_view_cursor(const TypedLens& lens, const SourceCursor& src);

Relation view_fetch_rec(const TypedLens& lens, const SourceCursor& src, const PredPtr& p) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base:
    case LensOp::Id:
        if (!lens.view().is_leaf()) fail(Err::Internal, "fetch on a tree-shaped view");
        return src.fetch(p);
    case LensOp::Select: return view_fetch_rec(n.kids[0], src, pred_and(p, n.pred));
    case LensOp::Drop: {
        // P mentions only the kept attributes, so it commutes with the
        // projection.
        Relation sub = view_fetch_rec(n.kids[0], src, p);
        return rel_project(sub, lens.view().rel().attrs);
    }
    case LensOp::Rename: {
        PredPtr inner = pred_rename_subst(p, n.ren_to, n.ren_from);
        return rel_rename(view_fetch_rec(n.kids[0], src, inner), n.ren_from, n.ren_to);
    }
    case LensOp::Join: {
        const AttrSet& lu = n.kids[0].view().rel().attrs;
        const AttrSet& ru = n.kids[1].view().rel().attrs;
        AttrSet shared = attrs_intersect(lu, ru);
        PredPtr pl = pred_weaken_to(p, lu);
        PredPtr pr = pred_weaken_to(p, ru);
        Relation left, right;
        if (!pred_is_true(pl) || pred_is_true(pr)) {
            left = view_fetch_rec(n.kids[0], src.left(), pl);
            PredPtr rp = pr;
            if (!shared.empty())
                rp = pred_and(rp, pred_in(shared, rel_project(left, shared)));
            right = view_fetch_rec(n.kids[1], src.right(), rp);
        } else {
            right = view_fetch_rec(n.kids[1], src.right(), pr);
            PredPtr lp = pl;
            if (!shared.empty())
                lp = pred_and(lp, pred_in(shared, rel_project(right, shared)));
            left = view_fetch_rec(n.kids[0], src.left(), lp);
        }
        return rel_select(p, rel_join(left, right));
    }
    case LensOp::Compose:
        return view_fetch_rec(n.kids[1], make_view_cursor(n.kids[0], src), p);
    case LensOp::Sym:
    case LensOp::Assoc:
    case LensOp::Tensor: fail(Err::Internal, "fetch on a tree-shaped view");
    }
    fail(Err::Internal, "bad lens op");
}

SchemaValue materialize_cursor(const SourceCursor& src) {
    if (src.is_leaf()) return SchemaValue::leaf(src.fetch(pred_true()));
    return SchemaValue::node(materialize_cursor(src.left()), materialize_cursor(src.right()));
}

SourceCursor make_view_cursor(const TypedLens& lens, const SourceCursor& src) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base:
    case LensOp::Id: return src;
    case LensOp::Select:
    case LensOp::Drop:
    case LensOp::Rename:
    case LensOp::Join:
        return SourceCursor::leaf(
            [lens, src](const PredPtr& p) { return view_fetch_rec(lens, src, p); });
    case LensOp::Compose: return make_view_cursor(n.kids[1], make_view_cursor(n.kids[0], src));
    case LensOp::Sym: return SourceCursor::node(src.right(), src.left());
    case LensOp::Assoc:
        return SourceCursor::node(SourceCursor::node(src.left(), src.right().left()),
                                  src.right().right());
    case LensOp::Tensor:
        return SourceCursor::node(make_view_cursor(n.kids[0], src.left()),
                                  make_view_cursor(n.kids[1], src.right()));
    }
    fail(Err::Internal, "bad lens op");
}

SchemaValue get_cursor_rec(const TypedLens& lens, const SourceCursor& src) {
    if (lens.view().is_leaf())
        return SchemaValue::leaf(view_fetch_rec(lens, src, pred_true()));
    return materialize_cursor(make_view_cursor(lens, src));
}

// ---- naive put ------------------------------------------------------------

enum class DropStyle { Simplified, Bohannon };

Relation select_put(const PredPtr& p, const FunDepSet& f, const Relation& m, const Relation& n) {
    Relation m0 = rel_merge(rel_select(pred_not(p), m), f, n);
    Relation n_sharp = rel_difference(rel_select(p, m0), n);
    return rel_difference(m0, n_sharp);
}

Relation drop_put_simplified(const LensNode& n, const Relation& m, const Relation& view) {
    Relation completed = rel_join(view, singleton_default(n.drop_attr, n.drop_default));
    return rel_revise(completed, FunDepSet::tree_form({n.drop_dep}), m);
}

Relation drop_put_bohannon(const LensNode& n, const Relation& m, const Relation& view) {
    AttrSet kept = view.domain();
    Relation n_new = rel_difference(view, rel_project(m, kept));
    Relation m0 = rel_union(rel_join(m, view),
                            rel_join(n_new, singleton_default(n.drop_attr, n.drop_default)));
    return rel_revise(m0, FunDepSet::tree_form({n.drop_dep}), m);
}

std::pair<Relation, Relation> join_put(const LensNode& n, const Relation& m, const Relation& nn,
                                       const Relation& o) {
    const FunDepSet& f = n.kids[0].view().rel().fds;
    const FunDepSet& g = n.kids[1].view().rel().fds;
    const AttrSet& u = n.kids[0].view().rel().attrs;
    const AttrSet& v = n.kids[1].view().rel().attrs;
    Relation m0 = rel_merge(m, f, rel_project(o, u));
    Relation n_prime = rel_merge(nn, g, rel_project(o, v));
    Relation l = rel_difference(rel_join(m0, n_prime), o);
    Relation m_prime = rel_difference(m0, rel_project(l, u));
    return {m_prime, n_prime};
}

SchemaValue put_rec(const TypedLens& lens, const SchemaValue& s, const SchemaValue& v,
                    DropStyle style) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base:
    case LensOp::Id: return v;
    case LensOp::Select: {
        Relation m = get_rec(n.kids[0], s).rel();
        const FunDepSet& f = n.kids[0].view().rel().fds;
        Relation m_new = select_put(n.pred, f, m, v.rel());
        return put_rec(n.kids[0], s, SchemaValue::leaf(std::move(m_new)), style);
    }
    case LensOp::Drop: {
        Relation m = get_rec(n.kids[0], s).rel();
        Relation m_new = style == DropStyle::Simplified ? drop_put_simplified(n, m, v.rel())
                                                        : drop_put_bohannon(n, m, v.rel());
        return put_rec(n.kids[0], s, SchemaValue::leaf(std::move(m_new)), style);
    }
    case LensOp::Join: {
        Relation m = get_rec(n.kids[0], s.left()).rel();
        Relation nn = get_rec(n.kids[1], s.right()).rel();
        auto [m_new, n_new] = join_put(n, m, nn, v.rel());
        return SchemaValue::node(
            put_rec(n.kids[0], s.left(), SchemaValue::leaf(std::move(m_new)), style),
            put_rec(n.kids[1], s.right(), SchemaValue::leaf(std::move(n_new)), style));
    }
    case LensOp::Rename: {
        Relation m_new = rel_rename(v.rel(), n.ren_to, n.ren_from);
        return put_rec(n.kids[0], s, SchemaValue::leaf(std::move(m_new)), style);
    }
    case LensOp::Compose: {
        SchemaValue mid = put_rec(n.kids[1], get_rec(n.kids[0], s), v, style);
        return put_rec(n.kids[0], s, mid, style);
    }
    case LensOp::Sym: return SchemaValue::node(v.right(), v.left());
    case LensOp::Assoc:
        return SchemaValue::node(v.left().left(),
                                 SchemaValue::node(v.left().right(), v.right()));
    case LensOp::Tensor:
        return SchemaValue::node(put_rec(n.kids[0], s.left(), v.left(), style),
                                 put_rec(n.kids[1], s.right(), v.right(), style));
    }
    fail(Err::Internal, "bad lens op");
}

// ---- incremental put -------------------------------------------------------

DeltaRelation leaf_delta(const SchemaDelta& d) {
    if (!d.is_leaf()) fail(Err::Internal, "expected a single-relation view delta");
    return d.delta();
}

SchemaDelta dput_rec(const TypedLens& lens, const SourceCursor& src, const SchemaDelta& dv) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base:
    case LensOp::Id: return dv;
    case LensOp::Select: {
        DeltaRelation dn = leaf_delta(dv);
        if (dn.is_empty()) return schema_empty_delta_of(lens.source());
        const FunDepSet& f = n.kids[0].view().rel().fds;
        PredPtr q = affected(f, dn.plus());
        Relation s0 = view_fetch_rec(n.kids[0], src, pred_and(q, pred_not(n.pred)));
        DeltaRelation dm0 = rel_diff(rel_merge(s0, f, dn.plus()), s0);
        dm0 = delta_difference(dm0, DeltaRelation::of_relation(dn.minus()));
        DeltaRelation crossed(rel_select(n.pred, dm0.plus()), rel_select(n.pred, dm0.minus()));
        DeltaRelation dn_sharp = delta_difference(crossed, dn);
        DeltaRelation dm = delta_difference(dm0, dn_sharp);
        return dput_rec(n.kids[0], src, SchemaDelta::leaf(std::move(dm)));
    }
    case LensOp::Drop: {
        DeltaRelation dn = leaf_delta(dv);
        if (dn.is_empty()) return schema_empty_delta_of(lens.source());
        const AttrSet& x = n.drop_dep.lhs;
        Relation keys = rel_union(rel_project(dn.plus(), x), rel_project(dn.minus(), x));
        Relation near = view_fetch_rec(n.kids[0], src, pred_in(x, keys));
        Relation dflt = singleton_default(n.drop_attr, n.drop_default);
        FunDepSet dep = FunDepSet::tree_form({n.drop_dep});
        DeltaRelation dm(rel_revise(rel_join(dn.plus(), dflt), dep, near),
                         rel_revise(rel_join(dn.minus(), dflt), dep, near));
        return dput_rec(n.kids[0], src, SchemaDelta::leaf(std::move(dm)));
    }
    case LensOp::Join: {
        DeltaRelation do_ = leaf_delta(dv);
        if (do_.is_empty()) return schema_empty_delta_of(lens.source());
        const FunDepSet& f = n.kids[0].view().rel().fds;
        const FunDepSet& g = n.kids[1].view().rel().fds;
        const AttrSet& u = n.kids[0].view().rel().attrs;
        const AttrSet& v = n.kids[1].view().rel().attrs;
        AttrSet shared = attrs_intersect(u, v);

        Relation plus_u = rel_project(do_.plus(), u);
        Relation plus_v = rel_project(do_.plus(), v);
        Relation left_affected = view_fetch_rec(n.kids[0], src.left(), affected(f, plus_u));
        Relation right_affected = view_fetch_rec(n.kids[1], src.right(), affected(g, plus_v));
        DeltaRelation dm0 = rel_diff(rel_merge(left_affected, f, plus_u), left_affected);
        DeltaRelation dn1 = rel_diff(rel_merge(right_affected, g, plus_v), right_affected);

        // Rows of each side joining the other side's changes; enough to
        // evaluate the incremental join formula near the deltas.
        auto key_pred = [&](const Relation& a, const Relation& b) {
            if (shared.empty()) return pred_true();
            return pred_in(shared,
                           rel_union(rel_project(a, shared), rel_project(b, shared)));
        };
        Relation left_near =
            view_fetch_rec(n.kids[0], src.left(), key_pred(dn1.plus(), dn1.minus()));
        Relation right_near_plus = view_fetch_rec(
            n.kids[1], src.right(),
            shared.empty() ? pred_true() : pred_in(shared, rel_project(dm0.plus(), shared)));
        Relation right_near_minus = view_fetch_rec(
            n.kids[1], src.right(),
            shared.empty() ? pred_true() : pred_in(shared, rel_project(dm0.minus(), shared)));

        Relation join_plus =
            rel_union(rel_join(delta_apply_unchecked(left_near, dm0), dn1.plus()),
                      rel_join(dm0.plus(), delta_apply_unchecked(right_near_plus, dn1)));
        Relation join_minus = rel_union(rel_join(dm0.minus(), right_near_minus),
                                        rel_join(left_near, dn1.minus()));
        DeltaRelation dl =
            delta_difference(DeltaRelation(std::move(join_plus), std::move(join_minus)), do_);
        DeltaRelation dm = delta_difference(
            dm0, DeltaRelation(rel_project(dl.plus(), u), rel_project(dl.minus(), u)));

        return SchemaDelta::node(dput_rec(n.kids[0], src.left(), SchemaDelta::leaf(std::move(dm))),
                                 dput_rec(n.kids[1], src.right(),
                                          SchemaDelta::leaf(std::move(dn1))));
    }
    case LensOp::Rename: {
        DeltaRelation dn = leaf_delta(dv);
        if (dn.is_empty()) return schema_empty_delta_of(lens.source());
        DeltaRelation dm(rel_rename(dn.plus(), n.ren_to, n.ren_from),
                         rel_rename(dn.minus(), n.ren_to, n.ren_from));
        return dput_rec(n.kids[0], src, SchemaDelta::leaf(std::move(dm)));
    }
    case LensOp::Compose: {
        SchemaDelta mid = dput_rec(n.kids[1], make_view_cursor(n.kids[0], src), dv);
        return dput_rec(n.kids[0], src, mid);
    }
    case LensOp::Sym: return SchemaDelta::node(dv.right(), dv.left());
    case LensOp::Assoc:
        return SchemaDelta::node(dv.left().left(),
                                 SchemaDelta::node(dv.left().right(), dv.right()));
    case LensOp::Tensor:
        return SchemaDelta::node(dput_rec(n.kids[0], src.left(), dv.left()),
                                 dput_rec(n.kids[1], src.right(), dv.right()));
    }
    fail(Err::Internal, "bad lens op");
}

// ---- incremental get --------------------------------------------------------

bool queryable(const TypedLens& lens) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base: return true;
    case LensOp::Select:
    case LensOp::Drop:
    case LensOp::Rename: return queryable(n.kids[0]);
    case LensOp::Join: return queryable(n.kids[0]) && queryable(n.kids[1]);
    case LensOp::Compose:
    case LensOp::Id:
    case LensOp::Sym:
    case LensOp::Assoc:
    case LensOp::Tensor: return false;
    }
    return false;
}

QueryPtr get_query_rec(const TypedLens& lens) {
    const LensNode& n = lens.n();
    switch (n.op) {
    case LensOp::Base: return q_var(n.table);
    case LensOp::Select: return q_select(n.pred, get_query_rec(n.kids[0]));
    case LensOp::Drop: return q_project(get_query_rec(n.kids[0]), lens.view().rel().attrs);
    case LensOp::Join: return q_join(get_query_rec(n.kids[0]), get_query_rec(n.kids[1]));
    case LensOp::Rename: return q_rename(get_query_rec(n.kids[0]), n.ren_from, n.ren_to);
    default:
        fail(Err::Unevaluable, "lens has no single-relation query form");
    }
}

void collect_env(const SchemaType& t, const SchemaValue& s, const SchemaDelta& d, DeltaEnv& env) {
    if (t.is_leaf()) {
        if (t.table().empty()) fail(Err::Internal, "unnamed source leaf");
        env[t.table()] = DeltaEnvEntry{s.rel(), d.delta()};
        return;
    }
    collect_env(t.left(), s.left(), d.left(), env);
    collect_env(t.right(), s.right(), d.right(), env);
}

SchemaDelta dget_rec(const TypedLens& lens, const SchemaValue& s, const SchemaDelta& ds) {
    const LensNode& n = lens.n();
    if (queryable(lens)) {
        DeltaEnv env;
        collect_env(lens.source(), s, ds, env);
        auto [base, delta] = query_deval(get_query_rec(lens), env);
        (void)base;
        return SchemaDelta::leaf(std::move(delta));
    }
    switch (n.op) {
    case LensOp::Base:
    case LensOp::Id: return ds;
    case LensOp::Select: {
        Relation m = get_rec(n.kids[0], s).rel();
        return SchemaDelta::leaf(
            dselect(n.pred, m, dget_rec(n.kids[0], s, ds).delta()));
    }
    case LensOp::Drop: {
        Relation m = get_rec(n.kids[0], s).rel();
        return SchemaDelta::leaf(
            dproject(m, dget_rec(n.kids[0], s, ds).delta(), lens.view().rel().attrs));
    }
    case LensOp::Join: {
        Relation m = get_rec(n.kids[0], s.left()).rel();
        Relation nn = get_rec(n.kids[1], s.right()).rel();
        return SchemaDelta::leaf(djoin(m, dget_rec(n.kids[0], s.left(), ds.left()).delta(), nn,
                                       dget_rec(n.kids[1], s.right(), ds.right()).delta()));
    }
    case LensOp::Rename: {
        Relation m = get_rec(n.kids[0], s).rel();
        return SchemaDelta::leaf(
            drename(m, dget_rec(n.kids[0], s, ds).delta(), n.ren_from, n.ren_to));
    }
    case LensOp::Compose:
        return dget_rec(n.kids[1], get_rec(n.kids[0], s), dget_rec(n.kids[0], s, ds));
    case LensOp::Sym: return SchemaDelta::node(ds.right(), ds.left());
    case LensOp::Assoc:
        return SchemaDelta::node(SchemaDelta::node(ds.left(), ds.right().left()),
                                 ds.right().right());
    case LensOp::Tensor:
        return SchemaDelta::node(dget_rec(n.kids[0], s.left(), ds.left()),
                                 dget_rec(n.kids[1], s.right(), ds.right()));
    }
    fail(Err::Internal, "bad lens op");
}

} // namespace

SchemaValue lens_get(const TypedLens& lens, const SchemaValue& source) {
    return get_rec(lens, source);
}

SchemaValue lens_get(const TypedLens& lens, const SourceCursor& source) {
    return get_cursor_rec(lens, source);
}

SchemaValue lens_put_naive(const TypedLens& lens, const SchemaValue& source,
                           const SchemaValue& view) {
    check_schema_conforms(view, lens.view(), "updated view");
    return put_rec(lens, source, view, DropStyle::Simplified);
}

SchemaValue lens_put_drop_bohannon(const TypedLens& lens, const SchemaValue& source,
                                   const SchemaValue& view) {
    if (lens.op() != LensOp::Drop)
        fail(Err::TypeError, "lens_put_drop_bohannon expects a drop lens");
    check_schema_conforms(view, lens.view(), "updated view");
    return put_rec(lens, source, view, DropStyle::Bohannon);
}

void lens_validate_view_update(const TypedLens& lens, const SchemaValue& view,
                               const SchemaDelta& view_delta) {
    if (!schema_delta_minimal(view_delta, view))
        fail(Err::NotMinimal, "view delta is not minimal for the current view");
    check_schema_conforms(schema_apply(view, view_delta), lens.view(), "updated view");
}

SchemaDelta lens_delta_put(const TypedLens& lens, const SourceCursor& source,
                           const SchemaDelta& view_delta, const DeltaPutOptions& opts) {
    if (opts.validate) {
        if (opts.current_view) {
            lens_validate_view_update(lens, *opts.current_view, view_delta);
        } else {
            lens_validate_view_update(lens, lens_get(lens, source), view_delta);
        }
    }
    return dput_rec(lens, source, view_delta);
}

SchemaDelta lens_delta_get(const TypedLens& lens, const SchemaValue& source,
                           const SchemaDelta& source_delta) {
    if (!schema_delta_minimal(source_delta, source))
        fail(Err::NotMinimal, "source delta is not minimal for the source");
    return dget_rec(lens, source, source_delta);
}

QueryPtr lens_get_query(const TypedLens& lens) { return get_query_rec(lens); }

Relation lens_view_fetch(const TypedLens& lens, const SourceCursor& source, const PredPtr& p) {
    return view_fetch_rec(lens, source, p);
}

} // namespace relens
