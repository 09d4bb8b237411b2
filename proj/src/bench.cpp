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
#include "relens/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "relens/sql.hpp"
#include "relens/sqlexec.hpp"

namespace relens {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs.empty() ? 0 : xs[xs.size() / 2];
}

size_t median_sz(std::vector<size_t> xs) {
    std::sort(xs.begin(), xs.end());
    return xs.empty() ? 0 : xs[xs.size() / 2];
}

Value iv(int64_t x) { return Value::of_int(x); }

void validate_config(const BenchConfig& c) {
    if (c.n < 10) fail(Err::ParseError, "bench requires n >= 10");
    if (c.trials < 1 || c.trials % 2 == 0) fail(Err::ParseError, "bench trials must be odd");
}

// Rewrites selected view rows with new values for one column.
Relation modify_rows(const Relation& view, const std::string& guard_attr, int64_t lo, int64_t hi,
                     bool inclusive, const std::string& set_attr, int64_t set_to) {
    size_t guard = view.index_of_checked(guard_attr);
    size_t target = view.index_of_checked(set_attr);
    std::vector<Row> rows = view.rows();
    for (auto& r : rows) {
        int64_t g = r[guard].as_int();
        bool hit = inclusive ? (g >= lo && g <= hi) : (g > lo && g < hi);
        if (hit) r[target] = iv(set_to);
    }
    return Relation::from_rows(view.domain(), std::move(rows));
}

struct PutTimings {
    double naive_total = 0, naive_query = 0, incr_total = 0, incr_query = 0;
    size_t query_count = 0, delta_rows = 0;
};

// Times one naive put and one incremental delta-put against the same
// update, asserting that the two paths produce the same new source first.
PutTimings time_put(TableStore& store, const TypedLens& lens, const Relation& new_view,
                    bool run_naive) {
    PutTimings out;
    SourceCursor cursor = store.cursor_for(lens.source());

    SchemaValue old_view = lens_get(lens, cursor);
    DeltaRelation dv = rel_diff(new_view, old_view.rel());
    SchemaDelta view_delta = SchemaDelta::leaf(dv);
    lens_validate_view_update(lens, old_view, view_delta);
    out.delta_rows = dv.size();

    DeltaPutOptions opts;
    opts.validate = false; // validated above, against the materialized view
    store.reset_recording();
    store.start_recording();
    auto t0 = Clock::now();
    SchemaDelta ds = lens_delta_put(lens, cursor, view_delta, opts);
    out.incr_total = ms_since(t0);
    store.stop_recording();
    out.incr_query = static_cast<double>(store.fetch_time_ns()) / 1e6;
    out.query_count = store.fetch_count();

    if (run_naive) {
        store.reset_recording();
        store.start_recording();
        t0 = Clock::now();
        SchemaValue s = store.source_value(lens.source());
        SchemaValue s_new = lens_put_naive(lens, s, SchemaValue::leaf(new_view));
        out.naive_total = ms_since(t0);
        store.stop_recording();
        out.naive_query = static_cast<double>(store.fetch_time_ns()) / 1e6;
        store.reset_recording();

        if (!(schema_apply(s, ds) == s_new))
            fail(Err::Internal, "naive and incremental puts disagree");
    } else {
        // Without the naive reference, check ΔPutGet directly against the
        // store: applying the source delta must reproduce the view.
        TableStore copy = store;
        std::vector<std::string> names = lens.source().tables();
        std::function<void(const SchemaType&, const SchemaDelta&)> apply =
            [&](const SchemaType& t, const SchemaDelta& d) {
                if (t.is_leaf()) {
                    copy.apply_delta(t.table(), d.delta());
                    return;
                }
                apply(t.left(), d.left());
                apply(t.right(), d.right());
            };
        apply(lens.source(), ds);
        if (!(lens_get(lens, copy.cursor_for(lens.source())).rel() == new_view))
            fail(Err::Internal, "incremental put does not reproduce the updated view");
    }
    return out;
}

BenchRow summarize(const std::string& scenario, size_t n, size_t m,
                   const std::vector<PutTimings>& ts) {
    BenchRow row;
    row.scenario = scenario;
    row.n = n;
    row.m = m;
    std::vector<double> nt, nq, it_, iq;
    std::vector<size_t> qc, dr;
    for (const auto& t : ts) {
        nt.push_back(t.naive_total);
        nq.push_back(t.naive_query);
        it_.push_back(t.incr_total);
        iq.push_back(t.incr_query);
        qc.push_back(t.query_count);
        dr.push_back(t.delta_rows);
    }
    row.naive_total_ms = median(nt);
    row.naive_query_ms = median(nq);
    row.incr_total_ms = median(it_);
    row.incr_query_ms = median(iq);
    row.query_count = median_sz(qc);
    row.delta_rows = median_sz(dr);
    return row;
}

TypedLens select_over_join(const TableStore& store) {
    LensPtr expr = l_select(pred_eq("C", iv(3)), l_join(l_base("t1"), l_base("t2")));
    std::map<std::string, RelationType> tables = {{"t1", store.table_type("t1")},
                                                  {"t2", store.table_type("t2")}};
    return lens_build(expr, tables);
}

TypedLens join_lens(const TableStore& store) {
    std::map<std::string, RelationType> tables = {{"t1", store.table_type("t1")},
                                                  {"t2", store.table_type("t2")}};
    return lens_build(l_join(l_base("t1"), l_base("t2")), tables);
}

TypedLens drop_lens(const TableStore& store) {
    std::map<std::string, RelationType> tables = {{"t1", store.table_type("t1")}};
    return lens_build(l_drop("C", AttrSet{"A"}, iv(1), l_base("t1")), tables);
}

} // namespace

TableStore bench_generate(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    size_t n10 = std::max<size_t>(1, n / 10);
    std::uniform_int_distribution<int64_t> b_dist(0, static_cast<int64_t>(n10) - 1);
    std::uniform_int_distribution<int64_t> c_dist(0, 99);
    std::uniform_int_distribution<int64_t> d_dist(0, static_cast<int64_t>(n10) - 1);

    std::vector<Row> t1_rows;
    t1_rows.reserve(n);
    for (size_t i = 0; i < n; ++i)
        t1_rows.push_back(Row{iv(static_cast<int64_t>(i)), iv(b_dist(rng)), iv(c_dist(rng))});
    RelationType t1_type;
    t1_type.attrs = attrs_of({"A", "B", "C"});
    t1_type.types = {{"A", Kind::Int}, {"B", Kind::Int}, {"C", Kind::Int}};
    t1_type.fds = FunDepSet::tree_form({FunDep{{"A"}, {"B"}}, FunDep{{"A"}, {"C"}}});
    t1_type.keys = AttrSet{"A"};

    std::vector<Row> t2_rows;
    t2_rows.reserve(n10);
    for (size_t i = 0; i < n10; ++i)
        t2_rows.push_back(Row{iv(static_cast<int64_t>(i)), iv(d_dist(rng))});
    RelationType t2_type;
    t2_type.attrs = attrs_of({"B", "D"});
    t2_type.types = {{"B", Kind::Int}, {"D", Kind::Int}};
    t2_type.fds = FunDepSet::tree_form({FunDep{{"B"}, {"D"}}});
    t2_type.keys = AttrSet{"B"};

    TableStore store;
    store.create_table("t1", t1_type, Relation::from_rows(t1_type.attrs, std::move(t1_rows)));
    store.create_table("t2", t2_type, Relation::from_rows(t2_type.attrs, std::move(t2_rows)));
    return store;
}

std::vector<BenchRow> bench_run(const BenchConfig& config) {
    validate_config(config);
    size_t n = config.large ? 200000 : config.n;
    bool run_naive = !config.large;
    std::vector<BenchRow> rows;

    auto put_scenario = [&](const std::string& name,
                            const std::function<TypedLens(const TableStore&)>& mk_lens,
                            const std::function<Relation(const Relation&)>& update) {
        std::vector<PutTimings> ts;
        for (int trial = 0; trial < config.trials; ++trial) {
            TableStore store = bench_generate(n, config.seed + static_cast<uint64_t>(trial));
            TypedLens lens = mk_lens(store);
            Relation view = lens_get(lens, store.cursor_for(lens.source())).rel();
            ts.push_back(time_put(store, lens, update(view), run_naive));
        }
        rows.push_back(summarize(name, n, 0, ts));
    };

    if (config.scenario == "select") {
        put_scenario("select", select_over_join, [](const Relation& v) {
            return modify_rows(v, "B", 0, 100, true, "D", 5);
        });
    } else if (config.scenario == "project") {
        put_scenario("project", drop_lens, [](const Relation& v) {
            return modify_rows(v, "A", 60, 80, false, "B", 5);
        });
    } else if (config.scenario == "join") {
        put_scenario("join", join_lens, [](const Relation& v) {
            return modify_rows(v, "B", 40, 50, true, "C", 5);
        });
    } else if (config.scenario == "delta-size") {
        // Sweep target delta sizes; for each target find the smallest b'
        // (in steps of 100) whose update produces a delta at least that
        // large.
        std::vector<size_t> targets = {10, 25, 50, 75, 100, 150, 200, 250, 300, 350};
        int64_t b_max = static_cast<int64_t>(std::max<size_t>(1, n / 10));
        for (size_t target : targets) {
            std::vector<PutTimings> ts;
            bool reachable = true;
            for (int trial = 0; trial < config.trials && reachable; ++trial) {
                TableStore store = bench_generate(n, config.seed + static_cast<uint64_t>(trial));
                TypedLens lens = select_over_join(store);
                Relation view = lens_get(lens, store.cursor_for(lens.source())).rel();
                Relation updated = view;
                for (int64_t b_prime = 0; b_prime <= b_max; b_prime += 100) {
                    updated = modify_rows(view, "B", 0, b_prime, false, "D", 5);
                    if (rel_diff(updated, view).size() > target) break;
                }
                if (rel_diff(updated, view).size() <= target) {
                    reachable = false; // view too small for this target
                    break;
                }
                ts.push_back(time_put(store, lens, updated, run_naive));
            }
            if (!reachable) break;
            rows.push_back(summarize("delta-size", n, target, ts));
        }
    } else if (config.scenario == "delta-calc") {
        std::vector<PutTimings> ts;
        for (int trial = 0; trial < config.trials; ++trial) {
            TableStore store = bench_generate(n, config.seed + static_cast<uint64_t>(trial));
            TypedLens lens = join_lens(store);
            SourceCursor cursor = store.cursor_for(lens.source());
            Relation view = lens_get(lens, cursor).rel();
            Relation updated = modify_rows(view, "D", 0, 10, false, "B", 5);

            PutTimings t;
            store.reset_recording();
            store.start_recording();
            auto t0 = Clock::now();
            Relation fetched = lens_get(lens, cursor).rel();
            DeltaRelation dv = rel_diff(updated, fetched);
            t.incr_total = ms_since(t0);
            store.stop_recording();
            t.incr_query = static_cast<double>(store.fetch_time_ns()) / 1e6;
            t.query_count = store.fetch_count();
            t.delta_rows = dv.size();
            if (delta_apply(fetched, dv) != updated)
                fail(Err::Internal, "view delta does not reproduce the updated view");
            ts.push_back(t);
        }
        rows.push_back(summarize("delta-calc", n, 0, ts));
    } else if (config.scenario == "delta-apply") {
        std::vector<PutTimings> ts;
        for (int trial = 0; trial < config.trials; ++trial) {
            TableStore store = bench_generate(n, config.seed + static_cast<uint64_t>(trial));
            const Relation& t1 = store.table_contents("t1");
            std::mt19937_64 rng(config.seed + 1000 + static_cast<uint64_t>(trial));
            size_t m = std::max<size_t>(4, config.m);

            // A quarter of the target rows insert, a quarter delete, and
            // the remaining half pair into updates.
            std::vector<Row> plus, minus;
            std::uniform_int_distribution<size_t> pick(0, t1.size() - 1);
            std::uniform_int_distribution<int64_t> val(0, static_cast<int64_t>(n / 10) - 1);
            std::set<size_t> used;
            auto pick_fresh = [&]() {
                size_t i = pick(rng);
                while (used.count(i)) i = (i + 1) % t1.size();
                used.insert(i);
                return i;
            };
            for (size_t i = 0; i < m / 4; ++i)
                plus.push_back(Row{iv(static_cast<int64_t>(n + i)), iv(val(rng)), iv(val(rng))});
            for (size_t i = 0; i < m / 4; ++i) minus.push_back(t1.rows()[pick_fresh()]);
            for (size_t i = 0; i < m / 4; ++i) {
                Row victim = t1.rows()[pick_fresh()];
                Row updated = victim;
                updated[t1.index_of_checked("B")] = iv(val(rng) + 1000000); // guaranteed change
                minus.push_back(victim);
                plus.push_back(std::move(updated));
            }
            DeltaRelation d(Relation::from_rows(t1.domain(), std::move(plus)),
                            Relation::from_rows(t1.domain(), std::move(minus)));

            PutTimings t;
            t.delta_rows = d.size();
            auto t0 = Clock::now();
            std::vector<SqlStatement> incr = sql_dml("t1", store.table_type("t1").keys, d);
            t.incr_total = ms_since(t0);
            t.query_count = incr.size();

            Relation new_contents = delta_apply(t1, d);
            t0 = Clock::now();
            std::vector<SqlStatement> naive = sql_naive_dml("t1", new_contents);
            t.naive_total = ms_since(t0);

            SqlDatabase db1 = {{"t1", t1}}, db2 = {{"t1", t1}};
            sql_execute(db1, sql_script(incr));
            sql_execute(db2, sql_script(naive));
            if (db1["t1"] != new_contents || db2["t1"] != new_contents)
                fail(Err::Internal, "generated DML does not reproduce delta application");
            ts.push_back(t);
        }
        rows.push_back(summarize("delta-apply", n, config.m, ts));
    } else {
        fail(Err::ParseError, "unknown scenario '" + config.scenario + "'");
    }
    return rows;
}

void bench_report_tsv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "scenario\tn\tm\tdelta_rows\tnaive_total_ms\tnaive_query_ms\tincr_total_ms\t"
           "incr_query_ms\tquery_count\n";
    char buf[64];
    auto fmt = [&](double x) {
        snprintf(buf, sizeof buf, "%.3f", x);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        out << r.scenario << '\t' << r.n << '\t' << r.m << '\t' << r.delta_rows << '\t'
            << fmt(r.naive_total_ms) << '\t' << fmt(r.naive_query_ms) << '\t'
            << fmt(r.incr_total_ms) << '\t' << fmt(r.incr_query_ms) << '\t' << r.query_count
            << '\n';
    }
}

void bench_report_table(std::ostream& out, const std::vector<BenchRow>& rows) {
    char line[256];
    snprintf(line, sizeof line, "%-12s %8s %6s %6s %12s %12s %12s %12s %8s", "scenario", "n", "m",
             "delta", "naive_ms", "naive_q_ms", "incr_ms", "incr_q_ms", "queries");
    out << line << '\n';
    for (const auto& r : rows) {
        snprintf(line, sizeof line, "%-12s %8zu %6zu %6zu %12.3f %12.3f %12.3f %12.3f %8zu",
                 r.scenario.c_str(), r.n, r.m, r.delta_rows, r.naive_total_ms, r.naive_query_ms,
                 r.incr_total_ms, r.incr_query_ms, r.query_count);
        out << line << '\n';
    }
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(Err::Internal, "bad spearman input");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        size_t i = 0;
        while (i < order.size()) {
            size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (size_t k = i; k <= j; ++k) r[order[k]] = mid;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
    double num = 0, dx = 0, dy = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0 || dy == 0) return 0;
    return num / std::sqrt(dx * dy);
}

} // namespace relens
