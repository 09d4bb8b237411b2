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
#include "relens/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace relens {

namespace {

[[noreturn]] void parse_fail(size_t line, size_t col, const std::string& msg) {
    fail(Err::ParseError,
         "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

// RFC-style field splitting with double-quote escaping.
std::vector<std::string> split_line(const std::string& line, size_t lineno) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            out.push_back(field);
            field.clear();
            ++i;
            continue;
        }
        field += c;
        ++i;
    }
    if (quoted) parse_fail(lineno, line.size(), "unterminated quote");
    out.push_back(field);
    return out;
}

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct Header {
    AttrSet attrs;
    std::vector<Kind> kinds;
};

Header parse_header(const std::vector<std::string>& cells, size_t first_col,
                    const RelationType& declared) {
    Header h;
    for (size_t i = first_col; i < cells.size(); ++i) {
        auto pos = cells[i].find(':');
        if (pos == std::string::npos)
            parse_fail(1, i + 1, "header cell '" + cells[i] + "' is not name:type");
        std::string name = cells[i].substr(0, pos);
        Kind kind = kind_from_name(cells[i].substr(pos + 1));
        h.attrs.push_back(name);
        h.kinds.push_back(kind);
    }
    AttrSet sorted = h.attrs;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != declared.attrs)
        fail(Err::ParseError, "header does not match the declared attribute set");
    for (size_t i = 0; i < h.attrs.size(); ++i) {
        auto it = declared.types.find(h.attrs[i]);
        if (it != declared.types.end() && it->second != h.kinds[i])
            fail(Err::ParseError, "column '" + h.attrs[i] + "' has the wrong declared type");
    }
    return h;
}

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

Row parse_row(const Header& h, const std::vector<std::string>& cells, size_t first_col,
              size_t lineno) {
    if (cells.size() - first_col != h.attrs.size())
        parse_fail(lineno, cells.size(), "wrong number of fields");
    // Cells appear in header order; rows are stored against the sorted
    // domain.
    std::vector<std::pair<std::string, Value>> fields;
    for (size_t i = 0; i < h.attrs.size(); ++i) {
        try {
            fields.emplace_back(h.attrs[i], Value::parse(h.kinds[i], cells[first_col + i]));
        } catch (const Error& e) {
            parse_fail(lineno, first_col + i + 1, e.what());
        }
    }
    std::sort(fields.begin(), fields.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Row row;
    row.reserve(fields.size());
    for (auto& f : fields) row.push_back(std::move(f.second));
    return row;
}

} // namespace

Relation csv_load_relation(std::istream& in, const RelationType& declared) {
    std::vector<std::string> lines = read_lines(in);
    if (lines.empty()) return Relation::empty(declared.attrs);
    Header h = parse_header(split_line(lines[0], 1), 0, declared);
    std::vector<Row> rows;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        rows.push_back(parse_row(h, split_line(lines[i], i + 1), 0, i + 1));
    }
    return Relation::from_rows(declared.attrs, std::move(rows));
}

Relation csv_load_relation_file(const std::string& path, const RelationType& declared) {
    std::ifstream in(path);
    if (!in) fail(Err::ParseError, "cannot open '" + path + "'");
    return csv_load_relation(in, declared);
}

void csv_save_relation(std::ostream& out, const Relation& m,
                       const std::map<std::string, Kind>& types) {
    const AttrSet& d = m.domain();
    for (size_t i = 0; i < d.size(); ++i) {
        auto it = types.find(d[i]);
        if (it == types.end()) fail(Err::Internal, "no type for column '" + d[i] + "'");
        out << (i ? "," : "") << d[i] << ':' << kind_name(it->second);
    }
    out << '\n';
    for (const auto& r : m.rows()) {
        for (size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << quote_field(r[i].to_literal());
        out << '\n';
    }
}

void csv_save_relation_file(const std::string& path, const Relation& m,
                            const std::map<std::string, Kind>& types) {
    std::ofstream out(path);
    if (!out) fail(Err::ParseError, "cannot open '" + path + "' for writing");
    csv_save_relation(out, m, types);
}

std::string csv_relation_to_string(const Relation& m, const std::map<std::string, Kind>& types) {
    std::ostringstream out;
    csv_save_relation(out, m, types);
    return out.str();
}

DeltaRelation csv_load_delta(std::istream& in, const RelationType& declared) {
    std::vector<std::string> lines = read_lines(in);
    if (lines.empty()) return DeltaRelation::empty(declared.attrs);
    std::vector<std::string> head = split_line(lines[0], 1);
    if (head.empty() || !head[0].empty())
        fail(Err::ParseError, "delta header must start with an unnamed sign column");
    Header h = parse_header(head, 1, declared);
    std::vector<Row> plus, minus;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> cells = split_line(lines[i], i + 1);
        if (cells.empty() || (cells[0] != "+" && cells[0] != "-"))
            parse_fail(i + 1, 1, "sign column must be '+' or '-'");
        Row row = parse_row(h, cells, 1, i + 1);
        (cells[0] == "+" ? plus : minus).push_back(std::move(row));
    }
    return DeltaRelation(Relation::from_rows(declared.attrs, std::move(plus)),
                         Relation::from_rows(declared.attrs, std::move(minus)));
}

DeltaRelation csv_load_delta_file(const std::string& path, const RelationType& declared) {
    std::ifstream in(path);
    if (!in) fail(Err::ParseError, "cannot open '" + path + "'");
    return csv_load_delta(in, declared);
}

void csv_save_delta(std::ostream& out, const DeltaRelation& d,
                    const std::map<std::string, Kind>& types) {
    const AttrSet& dom = d.domain();
    out << "";
    for (size_t i = 0; i < dom.size(); ++i) {
        auto it = types.find(dom[i]);
        if (it == types.end()) fail(Err::Internal, "no type for column '" + dom[i] + "'");
        out << ',' << dom[i] << ':' << kind_name(it->second);
    }
    out << '\n';
    auto dump = [&](const Relation& m, char sign) {
        for (const auto& r : m.rows()) {
            out << sign;
            for (const auto& v : r) out << ',' << quote_field(v.to_literal());
            out << '\n';
        }
    };
    dump(d.minus(), '-');
    dump(d.plus(), '+');
}

std::map<std::string, Kind> csv_infer_types(const Relation& m) {
    std::map<std::string, Kind> types;
    for (const auto& a : m.domain()) types[a] = Kind::Int;
    if (!m.rows().empty())
        for (size_t i = 0; i < m.domain().size(); ++i)
            types[m.domain()[i]] = m.rows()[0][i].kind();
    return types;
}

} // namespace relens
