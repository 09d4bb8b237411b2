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

#include "relens/sql.hpp"

namespace relens {

/// A minimal executor for the canonical SQL dialect, independent of the
/// DML generator: it parses statement text and applies it to plain
/// relations. Used to check that emitted scripts reproduce delta
/// application exactly.
using SqlDatabase = std::map<std::string, Relation>;

/// Parse a WHERE expression (comparisons, IN lists, AND/OR/NOT, parens)
/// into a predicate.
PredPtr sql_parse_where(const std::string& text);

/// Execute semicolon-terminated INSERT/UPDATE/DELETE statements in order.
void sql_execute(SqlDatabase& db, const std::string& script);

/// Execute one SELECT * FROM t [WHERE ...] statement.
Relation sql_execute_select(const SqlDatabase& db, const std::string& stmt);

} // namespace relens
