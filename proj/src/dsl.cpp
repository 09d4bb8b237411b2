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
#include "relens/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace relens {

namespace {

struct Token {
    enum class Kind { Ident, Int, Str, Punct, End } kind = Kind::End;
    std::string text;
    int64_t int_value = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }
    bool at_end() const { return current_.kind == Token::Kind::End; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    bool accept_punct(const std::string& p) {
        if (current_.kind == Token::Kind::Punct && current_.text == p) {
            advance();
            return true;
        }
        return false;
    }

    bool accept_word(const std::string& w) {
        if (current_.kind == Token::Kind::Ident && current_.text == w) {
            advance();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail(Err::ParseError, "expected '" + p + "'" + context());
    }

    void expect_word(const std::string& w) {
        if (!accept_word(w)) fail(Err::ParseError, "expected '" + w + "'" + context());
    }

    std::string expect_ident() {
        if (current_.kind != Token::Kind::Ident)
            fail(Err::ParseError, "expected an identifier" + context());
        return next().text;
    }

    std::string context() const {
        return current_.kind == Token::Kind::End ? " at end of input"
                                                 : " before '" + current_.text + "'";
    }

private:
    void advance() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        current_ = Token{};
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_'))
                ++pos_;
            current_.kind = Token::Kind::Ident;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t start = pos_;
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            current_.kind = Token::Kind::Int;
            current_.text = src_.substr(start, pos_ - start);
            current_.int_value = std::stoll(current_.text);
            return;
        }
        if (c == '\'') {
            ++pos_;
            std::string out;
            while (pos_ < src_.size()) {
                if (src_[pos_] == '\'') {
                    if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\'') {
                        out += '\'';
                        pos_ += 2;
                        continue;
                    }
                    ++pos_;
                    current_.kind = Token::Kind::Str;
                    current_.text = std::move(out);
                    return;
                }
                out += src_[pos_++];
            }
            fail(Err::ParseError, "unterminated string literal");
        }
        for (const char* op : {"->", "!=", "<=", ">="}) {
            if (src_.compare(pos_, 2, op) == 0) {
                current_.kind = Token::Kind::Punct;
                current_.text = op;
                pos_ += 2;
                return;
            }
        }
        current_.kind = Token::Kind::Punct;
        current_.text = std::string(1, c);
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    Token current_;
};

std::optional<Value> literal(Lexer& lex) {
    const Token& t = lex.peek();
    if (t.kind == Token::Kind::Int) return Value::of_int(lex.next().int_value);
    if (t.kind == Token::Kind::Str) return Value::of_str(lex.next().text);
    if (t.kind == Token::Kind::Ident && (t.text == "true" || t.text == "false"))
        return Value::of_bool(lex.next().text == "true");
    return std::nullopt;
}

bool is_keyword(const std::string& w) {
    static const std::set<std::string> kws = {"and", "or", "not", "in", "where", "from",
                                              "with", "to",  "by",  "default"};
    return kws.count(w) > 0;
}

PredPtr parse_or(Lexer& lex);

PredPtr parse_atom(Lexer& lex) {
    if (lex.accept_punct("(")) {
        PredPtr p = parse_or(lex);
        lex.expect_punct(")");
        return p;
    }
    if (lex.accept_word("not")) return pred_not(parse_atom(lex));
    if (lex.accept_word("true")) return pred_true();
    if (lex.accept_word("false")) return pred_false();
    std::string attr = lex.expect_ident();
    if (lex.accept_word("in")) {
        lex.expect_punct("(");
        std::vector<Row> rows;
        do {
            auto v = literal(lex);
            if (!v) fail(Err::ParseError, "expected a literal inside 'in (...)'");
            rows.push_back(Row{*v});
        } while (lex.accept_punct(","));
        lex.expect_punct(")");
        return pred_in(AttrSet{attr}, Relation::from_rows(AttrSet{attr}, std::move(rows)));
    }
    std::string op;
    for (const char* candidate : {"=", "!=", "<=", ">=", "<", ">"}) {
        if (lex.accept_punct(candidate)) {
            op = candidate;
            break;
        }
    }
    if (op.empty()) fail(Err::ParseError, "expected a comparison after '" + attr + "'");
    if (auto v = literal(lex)) {
        if (op == "=") return pred_eq(attr, *v);
        if (op == "!=") return pred_cmp(attr, CmpOp::Ne, *v);
        if (op == "<") return pred_cmp(attr, CmpOp::Lt, *v);
        if (op == "<=") return pred_cmp(attr, CmpOp::Le, *v);
        if (op == ">") return pred_cmp(attr, CmpOp::Gt, *v);
        return pred_cmp(attr, CmpOp::Ge, *v);
    }
    if (op != "=") fail(Err::ParseError, "attribute-to-attribute comparison supports = only");
    std::string rhs = lex.expect_ident();
    if (is_keyword(rhs)) fail(Err::ParseError, "'" + rhs + "' cannot be an attribute name here");
    return pred_attr_eq(attr, rhs);
}

PredPtr parse_and(Lexer& lex) {
    PredPtr out = parse_atom(lex);
    while (lex.accept_word("and")) out = pred_and(out, parse_atom(lex));
    return out;
}

PredPtr parse_or(Lexer& lex) {
    PredPtr out = parse_and(lex);
    while (lex.accept_word("or")) out = pred_or(out, parse_and(lex));
    return out;
}

std::vector<FunDep> parse_fd_list(Lexer& lex, const std::string& terminator) {
    std::vector<FunDep> deps;
    while (!(lex.peek().kind == Token::Kind::Punct && lex.peek().text == terminator)) {
        std::vector<std::string> lhs, rhs;
        while (lex.peek().kind == Token::Kind::Ident) lhs.push_back(lex.next().text);
        lex.expect_punct("->");
        while (lex.peek().kind == Token::Kind::Ident) rhs.push_back(lex.next().text);
        deps.push_back(FunDep{attrs_sorted(lhs), attrs_sorted(rhs)});
        if (!lex.accept_punct(";")) break;
    }
    return deps;
}

// Raw (unresolved) lens declarations; references are resolved once the
// whole file is read.
struct RawLens {
    enum class Kind { Select, Join, Drop, Rename } kind;
    PredPtr pred;
    std::string ref1, ref2;
    std::string drop_attr;
    AttrSet drop_det;
    Value drop_default;
    std::string ren_from, ren_to;
};

} // namespace

FunDepSet parse_fds(const std::string& text) {
    Lexer lex(text);
    if (lex.at_end()) return FunDepSet();
    std::vector<FunDep> deps = parse_fd_list(lex, "\0");
    if (!lex.at_end()) fail(Err::ParseError, "trailing input after dependencies");
    return FunDepSet::tree_form(std::move(deps));
}

PredPtr parse_predicate(const std::string& text) {
    Lexer lex(text);
    PredPtr p = parse_or(lex);
    if (!lex.at_end()) fail(Err::ParseError, "trailing input after predicate");
    return p;
}

LensFile parse_lens_file(const std::string& text) {
    Lexer lex(text);
    LensFile out;
    std::vector<std::pair<std::string, RawLens>> raw;

    while (!lex.at_end()) {
        if (lex.accept_word("table")) {
            std::string name = lex.expect_ident();
            if (out.tables.count(name))
                fail(Err::ParseError, "table '" + name + "' declared twice");
            RelationType rt;
            lex.expect_punct("(");
            std::vector<std::string> attrs;
            do {
                std::string col = lex.expect_ident();
                lex.expect_punct(":");
                Kind kind = kind_from_name(lex.expect_ident());
                attrs.push_back(col);
                if (rt.types.count(col))
                    fail(Err::ParseError, "column '" + col + "' declared twice");
                rt.types[col] = kind;
            } while (lex.accept_punct(","));
            lex.expect_punct(")");
            rt.attrs = attrs_sorted(attrs);
            if (lex.accept_word("keys")) {
                lex.expect_punct("[");
                std::vector<std::string> keys;
                while (lex.peek().kind == Token::Kind::Ident) keys.push_back(lex.next().text);
                lex.expect_punct("]");
                rt.keys = attrs_sorted(keys);
                if (!attrs_subset(rt.keys, rt.attrs))
                    fail(Err::ParseError, "keys of '" + name + "' are not all columns");
            }
            if (lex.accept_word("fds")) {
                lex.expect_punct("[");
                rt.fds = FunDepSet::tree_form(parse_fd_list(lex, "]"));
                lex.expect_punct("]");
                if (!attrs_subset(rt.fds.mentioned(), rt.attrs))
                    fail(Err::ParseError, "dependencies of '" + name + "' mention non-columns");
            }
            out.tables[name] = std::move(rt);
            continue;
        }
        if (lex.accept_word("lens")) {
            std::string name = lex.expect_ident();
            lex.expect_punct("=");
            RawLens r;
            if (lex.accept_word("select")) {
                r.kind = RawLens::Kind::Select;
                lex.expect_word("from");
                r.ref1 = lex.expect_ident();
                lex.expect_word("where");
                r.pred = parse_or(lex);
            } else if (lex.accept_word("join")) {
                r.kind = RawLens::Kind::Join;
                r.ref1 = lex.expect_ident();
                lex.expect_word("with");
                r.ref2 = lex.expect_ident();
            } else if (lex.accept_word("drop")) {
                r.kind = RawLens::Kind::Drop;
                r.drop_attr = lex.expect_ident();
                lex.expect_word("determined");
                lex.expect_word("by");
                lex.expect_punct("(");
                std::vector<std::string> det;
                do {
                    det.push_back(lex.expect_ident());
                } while (lex.accept_punct(","));
                lex.expect_punct(")");
                r.drop_det = attrs_sorted(det);
                lex.expect_word("default");
                auto v = literal(lex);
                if (!v) fail(Err::ParseError, "expected a literal after 'default'");
                r.drop_default = *v;
                lex.expect_word("from");
                r.ref1 = lex.expect_ident();
            } else if (lex.accept_word("rename")) {
                r.kind = RawLens::Kind::Rename;
                r.ren_from = lex.expect_ident();
                lex.expect_word("to");
                r.ren_to = lex.expect_ident();
                lex.expect_word("in");
                r.ref1 = lex.expect_ident();
            } else {
                fail(Err::ParseError, "expected select, join, drop or rename" + lex.context());
            }
            for (const auto& [existing, _] : raw)
                if (existing == name) fail(Err::ParseError, "lens '" + name + "' declared twice");
            raw.emplace_back(name, std::move(r));
            continue;
        }
        fail(Err::ParseError, "expected a table or lens declaration" + lex.context());
    }

    // Resolve references: a name is a lens if declared as one, otherwise a
    // base table.
    std::map<std::string, LensPtr> resolved;
    std::set<std::string> referenced;
    std::function<LensPtr(const std::string&, std::set<std::string>&)> resolve =
        [&](const std::string& name, std::set<std::string>& visiting) -> LensPtr {
        auto done = resolved.find(name);
        if (done != resolved.end()) return done->second;
        auto decl = std::find_if(raw.begin(), raw.end(),
                                 [&](const auto& p) { return p.first == name; });
        if (decl == raw.end()) {
            if (!out.tables.count(name))
                fail(Err::ParseError, "reference to undeclared name '" + name + "'");
            return l_base(name);
        }
        if (!visiting.insert(name).second)
            fail(Err::ParseError, "lens '" + name + "' is defined in terms of itself");
        const RawLens& r = decl->second;
        LensPtr lens;
        switch (r.kind) {
        case RawLens::Kind::Select:
            lens = l_select(r.pred, resolve(r.ref1, visiting));
            break;
        case RawLens::Kind::Join:
            lens = l_join(resolve(r.ref1, visiting), resolve(r.ref2, visiting));
            break;
        case RawLens::Kind::Drop:
            lens = l_drop(r.drop_attr, r.drop_det, r.drop_default, resolve(r.ref1, visiting));
            break;
        case RawLens::Kind::Rename:
            lens = l_rename(r.ren_from, r.ren_to, resolve(r.ref1, visiting));
            break;
        }
        visiting.erase(name);
        resolved[name] = lens;
        return lens;
    };

    for (const auto& [name, r] : raw) {
        referenced.insert(r.ref1);
        if (!r.ref2.empty()) referenced.insert(r.ref2);
    }
    for (const auto& [name, r] : raw) {
        std::set<std::string> visiting;
        out.lenses.emplace_back(name, resolve(name, visiting));
    }
    if (raw.empty()) fail(Err::ParseError, "no lens declarations");
    for (auto it = out.lenses.rbegin(); it != out.lenses.rend(); ++it) {
        if (!referenced.count(it->first)) {
            out.root_name = it->first;
            out.root = it->second;
            break;
        }
    }
    if (!out.root) {
        out.root_name = out.lenses.back().first;
        out.root = out.lenses.back().second;
    }
    return out;
}

LensFile parse_lens_file_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_lens_file(ss.str());
}

} // namespace relens
