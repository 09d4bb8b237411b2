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
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "relens/bench.hpp"
#include "relens/csv.hpp"
#include "relens/dsl.hpp"
#include "relens/sql.hpp"

namespace {

using namespace relens;

int exit_code_for(Err kind) {
    switch (kind) {
    case Err::ParseError: return 2;
    case Err::TypeError:
    case Err::NotTreeForm:
    case Err::UnsupportedVariant:
    case Err::UnknownTable: return 3;
    case Err::SchemaViolation:
    case Err::NotMinimal:
    case Err::FDViolation:
    case Err::Overlap:
    case Err::DomainMismatch:
    case Err::PreconditionViolated: return 4;
    default: return 1;
    }
}

struct Loaded {
    LensFile file;
    TableStore store;
    TypedLens lens;
};

Loaded load(const std::string& lens_path, const std::string& db_dir) {
    Loaded out;
    out.file = parse_lens_file_path(lens_path);
    for (const auto& [name, type] : out.file.tables) {
        Relation contents = csv_load_relation_file(db_dir + "/" + name + ".csv", type);
        out.store.create_table(name, type, contents);
    }
    out.lens = lens_build(out.file.root, out.file.tables);
    return out;
}

Relation current_view(const Loaded& l) {
    SchemaValue v = lens_get(l.lens, l.store.cursor_for(l.lens.source()));
    if (!v.is_leaf()) fail(Err::TypeError, "the root lens must have a single-relation view");
    return v.rel();
}

void save_store(const Loaded& l, const std::string& db_dir) {
    for (const auto& name : l.store.table_names())
        csv_save_relation_file(db_dir + "/" + name + ".csv", l.store.table_contents(name),
                               l.store.table_type(name).types);
}

void write_script(const std::string& path, const std::vector<SqlStatement>& statements) {
    if (path == "-") {
        std::cout << sql_script(statements);
        return;
    }
    std::ofstream out(path);
    if (!out) fail(Err::ParseError, "cannot open '" + path + "' for writing");
    out << sql_script(statements);
}

// Per-table deltas of a source schema delta, keyed by table name.
std::map<std::string, DeltaRelation> per_table(const SchemaType& t, const SchemaDelta& d) {
    std::map<std::string, DeltaRelation> out;
    if (t.is_leaf()) {
        out[t.table()] = d.delta();
        return out;
    }
    out = per_table(t.left(), d.left());
    for (auto& [name, delta] : per_table(t.right(), d.right())) out.emplace(name, delta);
    return out;
}

std::vector<SqlStatement> emit_dml(const Loaded& l,
                                   const std::map<std::string, DeltaRelation>& deltas,
                                   bool naive_dml) {
    std::vector<SqlStatement> script;
    for (const auto& [name, delta] : deltas) {
        if (delta.is_empty()) continue;
        if (naive_dml) {
            Relation next = delta_apply(l.store.table_contents(name), delta);
            for (auto& s : sql_naive_dml(name, next)) script.push_back(std::move(s));
        } else {
            for (auto& s : sql_dml(name, l.store.table_type(name).keys, delta))
                script.push_back(std::move(s));
        }
    }
    return script;
}

int cmd_get(const std::string& lens_path, const std::string& db_dir) {
    Loaded l = load(lens_path, db_dir);
    Relation view = current_view(l);
    std::cout << csv_relation_to_string(view, l.lens.view().rel().types);
    return 0;
}

int cmd_check(const std::string& lens_path, const std::string& db_dir) {
    Loaded l = load(lens_path, db_dir); // conformance checked on load
    Relation view = current_view(l);
    std::cout << "ok: lens '" << l.file.root_name << "' typechecks; view has " << view.size()
              << " rows over (";
    const AttrSet& attrs = l.lens.view().rel().attrs;
    for (size_t i = 0; i < attrs.size(); ++i) std::cout << (i ? ", " : "") << attrs[i];
    std::cout << ")\n";
    return 0;
}

int cmd_put(const std::string& lens_path, const std::string& db_dir,
            const std::string& view_path, const std::string& emit_sql, bool naive_dml) {
    Loaded l = load(lens_path, db_dir);
    Relation v_new = csv_load_relation_file(view_path, l.lens.view().rel());
    SchemaValue s = l.store.source_value(l.lens.source());
    SchemaValue s_new = lens_put_naive(l.lens, s, SchemaValue::leaf(v_new));
    if (!emit_sql.empty())
        write_script(emit_sql, emit_dml(l, per_table(l.lens.source(), schema_diff(s_new, s)),
                                        naive_dml));
    std::function<void(const SchemaType&, const SchemaValue&)> store_back =
        [&](const SchemaType& t, const SchemaValue& v) {
            if (t.is_leaf()) {
                l.store.replace(t.table(), v.rel());
                return;
            }
            store_back(t.left(), v.left());
            store_back(t.right(), v.right());
        };
    store_back(l.lens.source(), s_new);
    save_store(l, db_dir);
    return 0;
}

int cmd_dput(const std::string& lens_path, const std::string& db_dir,
             const std::string& delta_path, const std::string& view_path,
             const std::string& emit_sql, bool naive, bool naive_dml) {
    Loaded l = load(lens_path, db_dir);
    Relation view = current_view(l);

    DeltaRelation dv = DeltaRelation::empty(view.domain());
    if (!delta_path.empty())
        dv = csv_load_delta_file(delta_path, l.lens.view().rel());
    else
        dv = rel_diff(csv_load_relation_file(view_path, l.lens.view().rel()), view);
    SchemaDelta view_delta = SchemaDelta::leaf(dv);
    lens_validate_view_update(l.lens, SchemaValue::leaf(view), view_delta);

    SchemaDelta ds;
    if (naive) {
        SchemaValue s = l.store.source_value(l.lens.source());
        SchemaValue s_new =
            lens_put_naive(l.lens, s, SchemaValue::leaf(delta_apply(view, dv)));
        ds = schema_diff(s_new, s);
    } else {
        DeltaPutOptions opts;
        opts.validate = false; // validated above
        ds = lens_delta_put(l.lens, l.store.cursor_for(l.lens.source()), view_delta, opts);
    }

    std::map<std::string, DeltaRelation> deltas = per_table(l.lens.source(), ds);
    if (!emit_sql.empty()) write_script(emit_sql, emit_dml(l, deltas, naive_dml));

    // Apply transactionally: nothing is written back unless every table
    // accepts its delta.
    TableStore staged = l.store;
    for (const auto& [name, delta] : deltas) staged.apply_delta(name, delta);
    l.store = std::move(staged);
    save_store(l, db_dir);
    return 0;
}

int cmd_sql(const std::string& lens_path, const std::string& db_dir, const std::string& table,
            const std::string& delta_path, bool naive_dml) {
    Loaded l = load(lens_path, db_dir);
    if (!l.store.has_table(table)) fail(Err::UnknownTable, "unknown table '" + table + "'");
    DeltaRelation d = csv_load_delta_file(delta_path, l.store.table_type(table));
    if (!delta_minimal(d, l.store.table_contents(table)))
        fail(Err::NotMinimal, "delta is not minimal for the current table contents");
    std::map<std::string, DeltaRelation> deltas = {{table, d}};
    std::cout << sql_script(emit_dml(l, deltas, naive_dml));
    return 0;
}

int cmd_bench(const BenchConfig& config) {
    std::vector<BenchRow> rows = bench_run(config);
    bench_report_tsv(std::cout, rows);
    bench_report_table(std::cerr, rows);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relens: updatable relational views with incremental change propagation"};
    app.require_subcommand(1);

    std::string lens_path, db_dir, view_path, delta_path, emit_sql, table;
    bool naive = false, naive_dml = false, strict_incremental = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--lens", lens_path, "lens definition file")->required();
        cmd->add_option("--db", db_dir, "directory of table CSV files")->required();
    };

    CLI::App* get = app.add_subcommand("get", "print the view of the root lens as CSV");
    add_common(get);

    CLI::App* put = app.add_subcommand("put", "replace the source tables via the state-based put");
    add_common(put);
    put->add_option("--view", view_path, "updated view CSV")->required();
    put->add_option("--emit-sql", emit_sql, "write the DML script here ('-' for stdout)");
    put->add_flag("--naive-dml", naive_dml, "emit a full table rewrite instead of keyed DML");

    CLI::App* dput = app.add_subcommand("dput", "propagate a view change incrementally");
    add_common(dput);
    dput->add_option("--delta", delta_path, "view delta CSV (sign column + rows)");
    dput->add_option("--view", view_path, "updated view CSV (diffed against the current view)");
    dput->add_option("--emit-sql", emit_sql, "write the DML script here ('-' for stdout)");
    dput->add_flag("--naive", naive, "use the state-based put to compute the source deltas");
    dput->add_flag("--naive-dml", naive_dml, "emit a full table rewrite instead of keyed DML");
    dput->add_flag("--strict-incremental", strict_incremental,
                   "fail instead of falling back when incremental side conditions do not hold");

    CLI::App* sql = app.add_subcommand("sql", "print DML for a table delta");
    add_common(sql);
    sql->add_option("--table", table, "target table")->required();
    sql->add_option("--delta", delta_path, "table delta CSV")->required();
    sql->add_flag("--naive-dml", naive_dml, "emit a full table rewrite instead of keyed DML");

    CLI::App* check = app.add_subcommand("check", "typecheck the lens and verify the database");
    add_common(check);

    BenchConfig config;
    CLI::App* bench = app.add_subcommand("bench", "run a microbenchmark scenario");
    bench->add_option("--scenario", config.scenario,
                      "select | project | join | delta-size | delta-calc | delta-apply")
        ->required();
    bench->add_option("--n", config.n, "base table row count");
    bench->add_option("--m", config.m, "target delta size (delta-apply)");
    bench->add_option("--trials", config.trials, "odd repetition count, median taken");
    bench->add_option("--seed", config.seed, "generator seed");
    bench->add_flag("--large", config.large, "run at n=200000, incremental path only");

    CLI11_PARSE(app, argc, argv);
    (void)strict_incremental; // reserved for query-level tooling

    try {
        if (get->parsed()) return cmd_get(lens_path, db_dir);
        if (put->parsed()) return cmd_put(lens_path, db_dir, view_path, emit_sql, naive_dml);
        if (dput->parsed()) {
            if (delta_path.empty() == view_path.empty()) {
                std::cerr << "error: dput needs exactly one of --delta or --view\n";
                return 2;
            }
            return cmd_dput(lens_path, db_dir, delta_path, view_path, emit_sql, naive,
                            naive_dml);
        }
        if (sql->parsed()) return cmd_sql(lens_path, db_dir, table, delta_path, naive_dml);
        if (check->parsed()) return cmd_check(lens_path, db_dir);
        if (bench->parsed()) return cmd_bench(config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
