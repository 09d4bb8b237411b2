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

#include "relens/lens.hpp"

namespace relens {

/// A parsed lens file: table declarations plus named lens definitions.
///
///   table albums (album:str, quantity:int) keys [album] fds [album -> quantity]
///   lens J = join tracks with albums
///   lens D = drop date determined by (track) default 2018 from J
///   lens L = select from D where quantity > 2
///   lens R = rename track to name in L
///
/// References may be forward; a reference names either a table (a base
/// lens) or another lens. The root is the last lens not referenced by any
/// other lens.
struct LensFile {
    std::map<std::string, RelationType> tables;
    std::vector<std::pair<std::string, LensPtr>> lenses; // declaration order
    std::string root_name;
    LensPtr root;
};

LensFile parse_lens_file(const std::string& text);
LensFile parse_lens_file_path(const std::string& path);

/// `A -> B C; B -> D`
FunDepSet parse_fds(const std::string& text);

/// The predicate sub-grammar used after `where`.
PredPtr parse_predicate(const std::string& text);

} // namespace relens
