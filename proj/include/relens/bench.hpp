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

#include <iosfwd>

#include "relens/store.hpp"

namespace relens {

struct BenchConfig {
    std::string scenario; // select | project | join | delta-size | delta-calc | delta-apply
    size_t n = 10000;
    size_t m = 100;       // target delta size (delta-apply)
    int trials = 5;       // odd; medians are taken across trials
    uint64_t seed = 42;
    bool large = false;   // n = 200000, incremental path only
};

struct BenchRow {
    std::string scenario;
    size_t n = 0;
    size_t m = 0;
    size_t delta_rows = 0;
    double naive_total_ms = 0;
    double naive_query_ms = 0;
    double incr_total_ms = 0;
    double incr_query_ms = 0;
    size_t query_count = 0;
};

/// The two benchmark tables: t1(A,B,C) with n rows, A sequential, B
/// uniform in [0, n/10), C uniform in [0, 100), dependencies A -> B and
/// A -> C; t2(B,D) with n/10 rows, B sequential, D uniform in [0, n/10),
/// dependency B -> D. Reproducible from the seed.
TableStore bench_generate(size_t n, uint64_t seed);

/// Runs one scenario (the delta-size scenario sweeps a grid of target
/// delta sizes and returns one row per target). Every put scenario first
/// asserts that the naive and incremental paths agree, then times them.
std::vector<BenchRow> bench_run(const BenchConfig& config);

void bench_report_tsv(std::ostream& out, const std::vector<BenchRow>& rows);
void bench_report_table(std::ostream& out, const std::vector<BenchRow>& rows);

/// Spearman rank correlation with midranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace relens
