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
#include "relens/record.hpp"

#include <algorithm>

namespace relens {

AttrSet attrs_sorted(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    for (const auto& n : names)
        if (n.empty()) fail(Err::ParseError, "empty attribute name");
    return names;
}

AttrSet attrs_of(std::initializer_list<std::string> names) {
    return attrs_sorted(std::vector<std::string>(names));
}

AttrSet attrs_union(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

AttrSet attrs_intersect(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

AttrSet attrs_minus(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool attrs_subset(const AttrSet& a, const AttrSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool attrs_contains(const AttrSet& a, const std::string& name) {
    return std::binary_search(a.begin(), a.end(), name);
}

AttrSet attrs_rename(const AttrSet& a, const std::string& from, const std::string& to) {
    std::vector<std::string> out;
    out.reserve(a.size());
    for (const auto& n : a) out.push_back(n == from ? to : n);
    return attrs_sorted(std::move(out));
}

Record::Record(std::initializer_list<std::pair<std::string, Value>> fields) {
    *this = from_fields(std::vector<std::pair<std::string, Value>>(fields));
}

Record Record::from_fields(std::vector<std::pair<std::string, Value>> fields) {
    std::sort(fields.begin(), fields.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].first.empty()) fail(Err::ParseError, "empty attribute name in record");
        if (i > 0 && fields[i].first == fields[i - 1].first)
            fail(Err::ParseError, "duplicate attribute '" + fields[i].first + "' in record");
    }
    Record r;
    r.fields_ = std::move(fields);
    return r;
}

bool Record::has(const std::string& attr) const {
    auto it = std::lower_bound(fields_.begin(), fields_.end(), attr,
                               [](const auto& f, const std::string& a) { return f.first < a; });
    return it != fields_.end() && it->first == attr;
}

const Value& Record::get(const std::string& attr) const {
    auto it = std::lower_bound(fields_.begin(), fields_.end(), attr,
                               [](const auto& f, const std::string& a) { return f.first < a; });
    if (it == fields_.end() || it->first != attr)
        fail(Err::MissingAttribute, "record has no attribute '" + attr + "'");
    return it->second;
}

AttrSet Record::domain() const {
    AttrSet out;
    out.reserve(fields_.size());
    for (const auto& f : fields_) out.push_back(f.first);
    return out;
}

Record Record::project(const AttrSet& attrs) const {
    Record out;
    for (const auto& f : fields_)
        if (attrs_contains(attrs, f.first)) out.fields_.push_back(f);
    return out;
}

Record Record::antirestrict(const AttrSet& attrs) const {
    Record out;
    for (const auto& f : fields_)
        if (!attrs_contains(attrs, f.first)) out.fields_.push_back(f);
    return out;
}

Record Record::update(const Record& other) const {
    std::vector<std::pair<std::string, Value>> merged = fields_;
    for (const auto& f : other.fields_) {
        auto it = std::lower_bound(merged.begin(), merged.end(), f.first,
                                   [](const auto& a, const std::string& b) { return a.first < b; });
        if (it != merged.end() && it->first == f.first)
            it->second = f.second;
        else
            merged.insert(it, f);
    }
    Record out;
    out.fields_ = std::move(merged);
    return out;
}

Record Record::rename(const std::string& from, const std::string& to) const {
    if (!has(from)) fail(Err::BadRename, "attribute '" + from + "' not present");
    if (has(to)) fail(Err::BadRename, "attribute '" + to + "' already present");
    std::vector<std::pair<std::string, Value>> out;
    out.reserve(fields_.size());
    for (const auto& f : fields_)
        out.emplace_back(f.first == from ? to : f.first, f.second);
    return from_fields(std::move(out));
}

std::string Record::to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < fields_.size(); ++i) {
        if (i) s += ", ";
        s += fields_[i].first + "=" + fields_[i].second.to_literal();
    }
    return s + ")";
}

} // namespace relens
