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

#include "relens/schema.hpp"

namespace relens {

/// Relation CSV: header cells are `name:type` with type in {int,str,bool},
/// one column per attribute in sorted order; body rows hold literals. A
/// zero-byte file denotes the empty relation with the declared domain.
///
/// Delta CSV: the same header preceded by one unnamed sign column; each
/// body row starts with `+` or `-`, partitioning rows into the insertion
/// and deletion sets (which must be disjoint).
Relation csv_load_relation(std::istream& in, const RelationType& declared);
Relation csv_load_relation_file(const std::string& path, const RelationType& declared);
void csv_save_relation(std::ostream& out, const Relation& m,
                       const std::map<std::string, Kind>& types);
void csv_save_relation_file(const std::string& path, const Relation& m,
                            const std::map<std::string, Kind>& types);
std::string csv_relation_to_string(const Relation& m, const std::map<std::string, Kind>& types);

DeltaRelation csv_load_delta(std::istream& in, const RelationType& declared);
DeltaRelation csv_load_delta_file(const std::string& path, const RelationType& declared);
void csv_save_delta(std::ostream& out, const DeltaRelation& d,
                    const std::map<std::string, Kind>& types);

/// Column kinds inferred from a relation's rows (used when no declaration
/// is available, e.g. for views of untyped test relations).
std::map<std::string, Kind> csv_infer_types(const Relation& m);

} // namespace relens
