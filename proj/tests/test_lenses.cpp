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
#include <doctest.h>

#include "relens/sql.hpp"
#include "testutil.hpp"

using namespace relens;
using namespace relens::testutil;

namespace {

// The music catalog: albums(album, quantity) keyed by album, and
// tracks(track, date, rating, album) keyed by (track, album) with date and
// rating determined by track.
std::map<std::string, RelationType> music_tables() {
    RelationType albums;
    albums.attrs = attrs_of({"album", "quantity"});
    albums.types = {{"album", Kind::Str}, {"quantity", Kind::Int}};
    albums.fds = FunDepSet::tree_form({FunDep{{"album"}, {"quantity"}}});
    albums.keys = AttrSet{"album"};

    RelationType tracks;
    tracks.attrs = attrs_of({"album", "date", "rating", "track"});
    tracks.types = {{"album", Kind::Str},
                    {"date", Kind::Int},
                    {"rating", Kind::Int},
                    {"track", Kind::Str}};
    tracks.fds = FunDepSet::tree_form({FunDep{{"track"}, {"date", "rating"}}});
    tracks.keys = attrs_of({"album", "track"});

    return {{"albums", albums}, {"tracks", tracks}};
}

Record track_row(const char* track, int64_t date, int64_t rating, const char* album) {
    return Record{{"track", S(track)}, {"date", V(date)}, {"rating", V(rating)},
                  {"album", S(album)}};
}

Relation tracks_table() {
    return Relation::from_records({
        track_row("Lullaby", 1989, 3, "Galore"),
        track_row("Lullaby", 1989, 3, "Show"),
        track_row("Lovesong", 1989, 5, "Galore"),
        track_row("Lovesong", 1989, 5, "Paris"),
        track_row("Trust", 1992, 4, "Wish"),
    });
}

Relation albums_table() {
    auto album = [](const char* name, int64_t quantity) {
        return Record{{"album", S(name)}, {"quantity", V(quantity)}};
    };
    return Relation::from_records({album("Disintegration", 6), album("Show", 3),
                                   album("Galore", 1), album("Paris", 4), album("Wish", 5)});
}

// get/put over the Galore selection of the tracks table.
TypedLens galore_lens() {
    return lens_build(l_select(pred_eq("album", S("Galore")), l_base("tracks")),
                      music_tables());
}

// join -> drop date -> select quantity > 2, with tracks as the
// delete-left side of the join.
TypedLens composite_lens() {
    LensPtr expr = l_select(
        pred_cmp("quantity", CmpOp::Gt, V(2)),
        l_drop("date", AttrSet{"track"}, V(2018), l_join(l_base("tracks"), l_base("albums"))));
    return lens_build(expr, music_tables());
}

SchemaValue composite_source() {
    return SchemaValue::node(SchemaValue::leaf(tracks_table()),
                             SchemaValue::leaf(albums_table()));
}

Record view_row(const char* track, int64_t rating, const char* album, int64_t quantity) {
    return Record{{"track", S(track)}, {"rating", V(rating)}, {"album", S(album)},
                  {"quantity", V(quantity)}};
}

// Per-leaf diff of two schema values, as the derived incremental put.
SchemaDelta derived_dput(const TypedLens& lens, const SchemaValue& s, const SchemaDelta& dv) {
    SchemaValue view = lens_get(lens, s);
    return schema_diff(lens_put_naive(lens, s, schema_apply(view, dv)), s);
}

// A recording in-memory cursor: every leaf fetch is logged.
SourceCursor recording_cursor(const SchemaValue& v, std::vector<PredPtr>& log) {
    if (v.is_leaf()) {
        Relation rel = v.rel();
        return SourceCursor::leaf([rel, &log](const PredPtr& p) {
            log.push_back(p);
            return rel_select(p, rel);
        });
    }
    return SourceCursor::node(recording_cursor(v.left(), log),
                              recording_cursor(v.right(), log));
}

} // namespace

TEST_CASE("lens typing") {
    SUBCASE("the composite pipeline typechecks with the expected view") {
        TypedLens lens = composite_lens();
        CHECK(lens.view().rel().attrs == attrs_of({"album", "quantity", "rating", "track"}));
        // View dependencies: track -> rating (date dropped) and album -> quantity.
        CHECK(lens.view().rel().fds.to_string() == "album -> quantity; track -> rating");
    }
    SUBCASE("dropping a determining attribute is rejected") {
        RelationType t;
        t.attrs = attrs_of({"A", "B", "C"});
        t.types = {{"A", Kind::Int}, {"B", Kind::Int}, {"C", Kind::Int}};
        t.fds = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"B"}, {"C"}}});
        std::map<std::string, RelationType> tables = {{"t", t}};
        CHECK_THROWS_AS(lens_build(l_drop("B", AttrSet{"A"}, V(0), l_base("t")), tables),
                        Error);
        // Wrong declared determinant.
        CHECK_THROWS_AS(lens_build(l_drop("C", AttrSet{"A"}, V(0), l_base("t")), tables),
                        Error);
        CHECK_NOTHROW(lens_build(l_drop("C", AttrSet{"B"}, V(0), l_base("t")), tables));
    }
    SUBCASE("identity works on any schema") {
        SchemaType leaf = SchemaType::leaf(music_tables().at("albums"), "albums");
        TypedLens id = lens_build(l_id(), leaf);
        CHECK(id.view().is_leaf());
        SchemaValue s = SchemaValue::leaf(albums_table());
        CHECK(lens_get(id, s) == s);
        CHECK(lens_put_naive(id, s, s) == s);
    }
    SUBCASE("linearity: a base table may appear only once") {
        CHECK_THROWS_AS(lens_build(l_join(l_base("tracks"), l_base("tracks")), music_tables()),
                        Error);
    }
    SUBCASE("join requires the combined dependencies to stay a forest") {
        RelationType t1;
        t1.attrs = attrs_of({"A", "B", "C"});
        t1.types = {{"A", Kind::Int}, {"B", Kind::Int}, {"C", Kind::Int}};
        t1.fds = FunDepSet::tree_form({FunDep{{"A"}, {"B", "C"}}});
        RelationType t2;
        t2.attrs = attrs_of({"B", "D"});
        t2.types = {{"B", Kind::Int}, {"D", Kind::Int}};
        t2.fds = FunDepSet::tree_form({FunDep{{"B"}, {"D"}}});
        std::map<std::string, RelationType> tables = {{"t1", t1}, {"t2", t2}};
        // {A -> B C} ∪ {B -> D} is not in tree form; the split form works.
        CHECK_THROWS_AS(lens_build(l_join(l_base("t1"), l_base("t2")), tables), Error);
        tables["t1"].fds = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"A"}, {"C"}}});
        CHECK_NOTHROW(lens_build(l_join(l_base("t1"), l_base("t2")), tables));
    }
    SUBCASE("rename clashes are rejected") {
        CHECK_THROWS_AS(
            lens_build(l_rename("album", "quantity", l_base("albums")), music_tables()), Error);
        CHECK_THROWS_AS(lens_build(l_rename("missing", "x", l_base("albums")), music_tables()),
                        Error);
    }
    SUBCASE("only the delete-left join variant exists") {
        CHECK_THROWS_AS(lens_build(l_join(l_base("tracks"), l_base("albums"),
                                          JoinVariant::DeleteRight),
                                   music_tables()),
                        Error);
    }
}

TEST_CASE("select lens get and put reproduce the worked example") {
    TypedLens lens = galore_lens();
    SchemaValue source = SchemaValue::leaf(tracks_table());

    Relation view = lens_get(lens, source).rel();
    CHECK(view == Relation::from_records({track_row("Lullaby", 1989, 3, "Galore"),
                                          track_row("Lovesong", 1989, 5, "Galore")}));

    // Raising Lullaby's rating in the view updates both Lullaby rows in
    // the source.
    Relation new_view = Relation::from_records({track_row("Lullaby", 1989, 4, "Galore"),
                                                track_row("Lovesong", 1989, 5, "Galore")});
    Relation new_source = lens_put_naive(lens, source, SchemaValue::leaf(new_view)).rel();
    CHECK(new_source == Relation::from_records({
                            track_row("Lullaby", 1989, 4, "Galore"),
                            track_row("Lullaby", 1989, 4, "Show"),
                            track_row("Lovesong", 1989, 5, "Galore"),
                            track_row("Lovesong", 1989, 5, "Paris"),
                            track_row("Trust", 1992, 4, "Wish"),
                        }));

    // GetPut.
    CHECK(lens_put_naive(lens, source, SchemaValue::leaf(view)).rel() == tracks_table());

    // The same update as a delta.
    DeltaRelation dv = rel_diff(new_view, view);
    SchemaDelta ds = lens_delta_put(lens, SourceCursor::of_value(source), SchemaDelta::leaf(dv));
    CHECK(ds.delta() ==
          DeltaRelation(Relation::from_records({track_row("Lullaby", 1989, 4, "Galore"),
                                                track_row("Lullaby", 1989, 4, "Show")}),
                        Relation::from_records({track_row("Lullaby", 1989, 3, "Galore"),
                                                track_row("Lullaby", 1989, 3, "Show")})));
    CHECK(delta_apply(tracks_table(), ds.delta()) == new_source);
}

TEST_CASE("composite pipeline reproduces the composition example") {
    TypedLens lens = composite_lens();
    SchemaValue source = composite_source();

    Relation view = lens_get(lens, source).rel();
    CHECK(view == Relation::from_records({view_row("Lullaby", 3, "Show", 3),
                                          view_row("Lovesong", 5, "Paris", 4),
                                          view_row("Trust", 4, "Wish", 5)}));

    // The edited view: Lullaby rated up, Lovesong moved to Disintegration
    // with quantity 7, Trust removed.
    Relation new_view = Relation::from_records({view_row("Lullaby", 4, "Show", 3),
                                                view_row("Lovesong", 5, "Disintegration", 7)});

    SchemaValue new_source = lens_put_naive(lens, source, SchemaValue::leaf(new_view));
    Relation new_tracks = new_source.left().rel();
    Relation new_albums = new_source.right().rel();
    CHECK(new_tracks == Relation::from_records({
                            track_row("Lullaby", 1989, 4, "Galore"),
                            track_row("Lullaby", 1989, 4, "Show"),
                            track_row("Lovesong", 1989, 5, "Galore"),
                            track_row("Lovesong", 1989, 5, "Disintegration"),
                        }));
    CHECK(rel_select(pred_eq("album", S("Disintegration")), new_albums) ==
          Relation::from_records({Record{{"album", S("Disintegration")}, {"quantity", V(7)}}}));

    // PutGet for the composite.
    CHECK(lens_get(lens, new_source).rel() == new_view);

    // The incremental path produces the same per-table deltas.
    DeltaRelation dv = rel_diff(new_view, view);
    SchemaDelta ds = lens_delta_put(lens, SourceCursor::of_value(source), SchemaDelta::leaf(dv));
    CHECK(schema_apply(source, ds) == new_source);
}

TEST_CASE("drop lens put fills defaults for unmatched rows") {
    std::map<std::string, RelationType> tables = music_tables();
    TypedLens lens =
        lens_build(l_drop("date", AttrSet{"track"}, V(2018), l_base("tracks")), tables);
    SchemaValue source = SchemaValue::leaf(tracks_table());
    Relation view = lens_get(lens, source).rel();

    Record inserted{{"track", S("New")}, {"rating", V(1)}, {"album", S("Show")}};
    std::vector<Record> rows = view.records();
    rows.push_back(inserted);
    Relation new_view = Relation::from_records(rows);

    Relation new_source = lens_put_naive(lens, source, SchemaValue::leaf(new_view)).rel();
    // The inserted row has no date in the source, so the default applies.
    CHECK(rel_select(pred_eq("track", S("New")), new_source) ==
          Relation::from_records({track_row("New", 2018, 1, "Show")}));
    // Existing rows keep their dates.
    CHECK(rel_select(pred_eq("track", S("Lullaby")), new_source) ==
          Relation::from_records(
              {track_row("Lullaby", 1989, 3, "Galore"), track_row("Lullaby", 1989, 3, "Show")}));
}

TEST_CASE("both drop put definitions agree") {
    Rng rng(67);
    PipelineGen gen(rng);
    for (int i = 0; i < 60; ++i) {
        GenPipeline p = gen.generate_primitive(LensOp::Drop);
        Relation view = lens_get(p.lens, p.source).rel();
        Relation updated = gen.update_view(view, p.lens.view().rel());
        SchemaValue v = SchemaValue::leaf(updated);
        CHECK(lens_put_naive(p.lens, p.source, v) == lens_put_drop_bohannon(p.lens, p.source, v));
    }
    // The Bohannon variant refuses non-drop lenses.
    TypedLens select = galore_lens();
    SchemaValue source = SchemaValue::leaf(tracks_table());
    CHECK_THROWS_AS(
        lens_put_drop_bohannon(select, source, lens_get(select, source)), Error);
}

TEST_CASE("optimized delta put equals the derived incremental put") {
    Rng rng(71);
    PipelineGen gen(rng);
    std::map<LensOp, int> seen;
    for (int i = 0; i < 400; ++i) {
        GenPipeline p = gen.generate(2);
        Relation view = lens_get(p.lens, p.source).rel();
        Relation updated = gen.update_view(view, p.lens.view().rel());
        DeltaRelation dv = rel_diff(updated, view);
        SchemaDelta dv_tree = SchemaDelta::leaf(dv);

        SchemaDelta optimized =
            lens_delta_put(p.lens, SourceCursor::of_value(p.source), dv_tree);
        SchemaDelta derived = derived_dput(p.lens, p.source, dv_tree);
        CHECK(optimized == derived);
        CHECK(schema_delta_minimal(optimized, p.source));
        seen[p.lens.op()]++;
    }
    // The generator must actually exercise every primitive at the root.
    CHECK(seen[LensOp::Select] > 10);
    CHECK(seen[LensOp::Drop] > 10);
    CHECK(seen[LensOp::Join] > 10);
    CHECK(seen[LensOp::Rename] > 10);
}

TEST_CASE("delta put validates the view update first") {
    TypedLens lens = galore_lens();
    SchemaValue source = SchemaValue::leaf(tracks_table());
    SourceCursor cursor = SourceCursor::of_value(source);

    SUBCASE("non-minimal deltas are rejected") {
        Relation already = Relation::from_records({track_row("Lullaby", 1989, 3, "Galore")});
        SchemaDelta dv = SchemaDelta::leaf(
            DeltaRelation(already, Relation::empty(already.domain())));
        CHECK_THROWS_AS(lens_delta_put(lens, cursor, dv), Error);
    }
    SUBCASE("updates violating the view predicate are rejected") {
        Relation outsider = Relation::from_records({track_row("Intruder", 2001, 1, "Wish")});
        SchemaDelta dv = SchemaDelta::leaf(
            DeltaRelation(outsider, Relation::empty(outsider.domain())));
        CHECK_THROWS_AS(lens_delta_put(lens, cursor, dv), Error);
    }
    SUBCASE("updates violating the view dependencies are rejected") {
        Relation conflicted = Relation::from_records({track_row("Lovesong", 1989, 2, "Galore")});
        SchemaDelta dv = SchemaDelta::leaf(
            DeltaRelation(conflicted, Relation::empty(conflicted.domain())));
        CHECK_THROWS_AS(lens_delta_put(lens, cursor, dv), Error);
    }
    SUBCASE("the empty delta propagates to the empty source delta") {
        SchemaDelta dv = SchemaDelta::leaf(DeltaRelation::empty(lens.view().rel().attrs));
        CHECK(lens_delta_put(lens, cursor, dv).is_empty());
    }
}

TEST_CASE("generic combinators re-plumb values and deltas") {
    std::map<std::string, RelationType> tables = music_tables();
    SchemaType pair = SchemaType::node(SchemaType::leaf(tables.at("tracks"), "tracks"),
                                       SchemaType::leaf(tables.at("albums"), "albums"));
    SchemaValue source = composite_source();

    SUBCASE("sym swaps") {
        TypedLens sym = lens_build(l_sym(), pair);
        SchemaValue v = lens_get(sym, source);
        CHECK(v.left().rel() == albums_table());
        CHECK(v.right().rel() == tracks_table());
        CHECK(lens_put_naive(sym, source, v) == source);
        SchemaDelta dv = SchemaDelta::node(
            SchemaDelta::leaf(DeltaRelation::empty(albums_table().domain())),
            SchemaDelta::leaf(rel_diff(Relation::empty(tracks_table().domain()),
                                       Relation::empty(tracks_table().domain()))));
        SchemaDelta ds = lens_delta_put(sym, SourceCursor::of_value(source), dv);
        CHECK(ds.is_empty());
    }
    SUBCASE("tensor applies lenses side by side") {
        LensPtr expr = l_tensor(l_select(pred_eq("album", S("Galore")), l_base("tracks")),
                                l_id());
        TypedLens tensor = lens_build(expr, pair);
        SchemaValue v = lens_get(tensor, source);
        CHECK(v.left().rel().size() == 2);
        CHECK(v.right().rel() == albums_table());
        CHECK(lens_put_naive(tensor, source, v) == source);
    }
    SUBCASE("compose chains put through the intermediate view") {
        // Compose the join-drop part with a select built on its view.
        LensPtr inner = l_drop("date", AttrSet{"track"}, V(2018),
                               l_join(l_base("tracks"), l_base("albums")));
        TypedLens inner_typed = lens_build(inner, tables);
        LensPtr composed =
            l_compose(inner, l_select(pred_cmp("quantity", CmpOp::Gt, V(2)), l_id()));
        TypedLens lens = lens_build(composed, inner_typed.source());

        Relation view = lens_get(lens, source).rel();
        CHECK(view == lens_get(composite_lens(), source).rel());

        Relation new_view = Relation::from_records({view_row("Lullaby", 4, "Show", 3),
                                                    view_row("Lovesong", 5, "Paris", 4),
                                                    view_row("Trust", 4, "Wish", 5)});
        DeltaRelation dv = rel_diff(new_view, view);
        SchemaDelta ds =
            lens_delta_put(lens, SourceCursor::of_value(source), SchemaDelta::leaf(dv));
        CHECK(schema_apply(source, ds) ==
              lens_put_naive(lens, source, SchemaValue::leaf(new_view)));
    }
}

TEST_CASE("incremental get is delta-correct") {
    TypedLens lens = galore_lens();
    SchemaValue source = SchemaValue::leaf(tracks_table());
    AttrSet dom = tracks_table().domain();

    CHECK(lens_delta_get(lens, source, SchemaDelta::leaf(DeltaRelation::empty(dom))).is_empty());

    // Base lens: the view delta is the source delta.
    TypedLens base = lens_build(l_base("tracks"), music_tables());
    DeltaRelation ds(Relation::from_records({track_row("New", 2000, 2, "Wish")}),
                     Relation::from_records({track_row("Trust", 1992, 4, "Wish")}));
    CHECK(lens_delta_get(base, source, SchemaDelta::leaf(ds)).delta() == ds);

    // Select lens agrees with the incremental selection operator.
    CHECK(lens_delta_get(lens, source, SchemaDelta::leaf(ds)).delta() ==
          dselect(pred_eq("album", S("Galore")), tracks_table(), ds));

    Rng rng(73);
    PipelineGen gen(rng);
    for (int i = 0; i < 150; ++i) {
        GenPipeline p = gen.generate(2);
        // Random minimal source deltas, one per leaf.
        std::function<SchemaDelta(const SchemaValue&)> gen_delta =
            [&](const SchemaValue& v) -> SchemaDelta {
            if (v.is_leaf()) return SchemaDelta::leaf(gen_minimal_delta(rng, v.rel(), 6));
            return SchemaDelta::node(gen_delta(v.left()), gen_delta(v.right()));
        };
        SchemaDelta ds_tree = gen_delta(p.source);
        SchemaDelta dv = lens_delta_get(p.lens, p.source, ds_tree);
        SchemaValue new_source = schema_apply(p.source, ds_tree);
        CHECK(schema_apply(lens_get(p.lens, p.source), dv) == lens_get(p.lens, new_source));
    }
}

TEST_CASE("lens get query matches direct evaluation") {
    TypedLens lens = composite_lens();
    QueryPtr q = lens_get_query(lens);
    Env env = {{"tracks", tracks_table()}, {"albums", albums_table()}};
    CHECK(query_eval(q, env) == lens_get(lens, composite_source()).rel());
}

TEST_CASE("delta put fetches only affected rows") {
    TypedLens lens = composite_lens();
    SchemaValue source = composite_source();
    Relation view = lens_get(lens, source).rel();

    Relation new_view = Relation::from_records({view_row("Lullaby", 4, "Show", 3),
                                                view_row("Lovesong", 5, "Paris", 4),
                                                view_row("Trust", 4, "Wish", 5)});
    DeltaRelation dv = rel_diff(new_view, view);

    std::vector<PredPtr> fetches;
    SourceCursor cursor = recording_cursor(source, fetches);
    DeltaPutOptions opts;
    opts.validate = false;
    lens_delta_put(lens, cursor, SchemaDelta::leaf(dv), opts);

    CHECK(!fetches.empty());
    for (const auto& p : fetches) CHECK_FALSE(pred_is_true(p));
}

TEST_CASE("well-behavedness of random pipelines") {
    Rng rng(79);
    PipelineGen gen(rng);
    for (int i = 0; i < 300; ++i) {
        GenPipeline p = gen.generate(3);
        SchemaValue view = lens_get(p.lens, p.source);
        // GetPut.
        CHECK(lens_put_naive(p.lens, p.source, view) == p.source);
        // PutGet on a conformant update.
        Relation updated = gen.update_view(view.rel(), p.lens.view().rel());
        SchemaValue new_source = lens_put_naive(p.lens, p.source, SchemaValue::leaf(updated));
        CHECK(lens_get(p.lens, new_source).rel() == updated);
    }
}
