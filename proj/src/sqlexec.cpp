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
#include "relens/sqlexec.hpp"

#include <algorithm>
#include <cctype>

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

    bool accept_keyword(const std::string& kw) {
        if (current_.kind == Token::Kind::Ident && upper(current_.text) == kw) {
            advance();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail(Err::ParseError, "expected '" + p + "' in SQL");
    }

    void expect_keyword(const std::string& kw) {
        if (!accept_keyword(kw)) fail(Err::ParseError, "expected " + kw + " in SQL");
    }

    std::string expect_ident() {
        if (current_.kind != Token::Kind::Ident)
            fail(Err::ParseError, "expected an identifier in SQL");
        return next().text;
    }

    static std::string upper(std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        return s;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_ = Token{};
        if (pos_ >= src_.size()) {
            current_.kind = Token::Kind::End;
            return;
        }
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
            fail(Err::ParseError, "unterminated string literal in SQL");
        }
        // Multi-character operators first.
        for (const char* op : {"<=", ">=", "<>"}) {
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
    if (t.kind == Token::Kind::Ident) {
        std::string up = Lexer::upper(t.text);
        if (up == "TRUE") {
            lex.next();
            return Value::of_bool(true);
        }
        if (up == "FALSE") {
            lex.next();
            return Value::of_bool(false);
        }
    }
    return std::nullopt;
}

PredPtr parse_or(Lexer& lex);

PredPtr parse_primary(Lexer& lex) {
    if (lex.accept_punct("(")) {
        PredPtr inner = parse_or(lex);
        lex.expect_punct(")");
        return inner;
    }
    if (lex.accept_keyword("NOT")) return pred_not(parse_primary(lex));
    if (lex.peek().kind == Token::Kind::Ident) {
        std::string up = Lexer::upper(lex.peek().text);
        if (up == "TRUE") {
            lex.next();
            return pred_true();
        }
        if (up == "FALSE") {
            lex.next();
            return pred_false();
        }
        std::string attr = lex.next().text;
        if (lex.accept_keyword("IN")) {
            lex.expect_punct("(");
            std::vector<Row> rows;
            do {
                auto v = literal(lex);
                if (!v) fail(Err::ParseError, "expected a literal in IN list");
                rows.push_back(Row{*v});
            } while (lex.accept_punct(","));
            lex.expect_punct(")");
            return pred_in(AttrSet{attr}, Relation::from_rows(AttrSet{attr}, std::move(rows)));
        }
        std::string op;
        for (const char* candidate : {"=", "<=", ">=", "<>", "<", ">"}) {
            if (lex.accept_punct(candidate)) {
                op = candidate;
                break;
            }
        }
        if (op.empty()) fail(Err::ParseError, "expected a comparison operator after " + attr);
        if (auto v = literal(lex)) {
            if (op == "=") return pred_eq(attr, *v);
            if (op == "<") return pred_cmp(attr, CmpOp::Lt, *v);
            if (op == "<=") return pred_cmp(attr, CmpOp::Le, *v);
            if (op == ">") return pred_cmp(attr, CmpOp::Gt, *v);
            if (op == ">=") return pred_cmp(attr, CmpOp::Ge, *v);
            return pred_cmp(attr, CmpOp::Ne, *v);
        }
        std::string rhs = lex.expect_ident();
        if (op != "=") fail(Err::ParseError, "attribute comparison supports = only");
        return pred_attr_eq(attr, rhs);
    }
    fail(Err::ParseError, "unexpected token in SQL WHERE clause");
}

PredPtr parse_and(Lexer& lex) {
    PredPtr out = parse_primary(lex);
    while (lex.accept_keyword("AND")) out = pred_and(out, parse_primary(lex));
    return out;
}

PredPtr parse_or(Lexer& lex) {
    PredPtr out = parse_and(lex);
    while (lex.accept_keyword("OR")) out = pred_or(out, parse_and(lex));
    return out;
}

Relation& table_ref(SqlDatabase& db, const std::string& name) {
    auto it = db.find(name);
    if (it == db.end()) fail(Err::UnknownTable, "unknown table '" + name + "' in SQL");
    return it->second;
}

void exec_one(SqlDatabase& db, Lexer& lex) {
    if (lex.accept_keyword("INSERT")) {
        lex.expect_keyword("INTO");
        Relation& t = table_ref(db, lex.expect_ident());
        lex.expect_punct("(");
        std::vector<std::string> cols;
        do {
            cols.push_back(lex.expect_ident());
        } while (lex.accept_punct(","));
        lex.expect_punct(")");
        lex.expect_keyword("VALUES");
        lex.expect_punct("(");
        std::vector<Value> vals;
        do {
            auto v = literal(lex);
            if (!v) fail(Err::ParseError, "expected a literal in VALUES");
            vals.push_back(*v);
        } while (lex.accept_punct(","));
        lex.expect_punct(")");
        lex.expect_punct(";");
        if (cols.size() != vals.size()) fail(Err::ParseError, "column/value count mismatch");
        std::vector<std::pair<std::string, Value>> fields;
        for (size_t i = 0; i < cols.size(); ++i) fields.emplace_back(cols[i], vals[i]);
        Record rec = Record::from_fields(std::move(fields));
        if (rec.domain() != t.domain())
            fail(Err::ParseError, "INSERT columns do not match the table domain");
        std::vector<Row> rows = t.rows();
        Row row;
        for (const auto& f : rec.fields()) row.push_back(f.second);
        rows.push_back(std::move(row));
        t = Relation::from_rows(t.domain(), std::move(rows));
        return;
    }
    if (lex.accept_keyword("DELETE")) {
        lex.expect_keyword("FROM");
        Relation& t = table_ref(db, lex.expect_ident());
        PredPtr where = pred_true();
        if (lex.accept_keyword("WHERE")) where = parse_or(lex);
        lex.expect_punct(";");
        t = rel_difference(t, rel_select(where, t));
        return;
    }
    if (lex.accept_keyword("UPDATE")) {
        Relation& t = table_ref(db, lex.expect_ident());
        lex.expect_keyword("SET");
        std::vector<std::pair<std::string, Value>> sets;
        do {
            std::string col = lex.expect_ident();
            lex.expect_punct("=");
            auto v = literal(lex);
            if (!v) fail(Err::ParseError, "expected a literal in SET");
            sets.emplace_back(col, *v);
        } while (lex.accept_punct(","));
        PredPtr where = pred_true();
        if (lex.accept_keyword("WHERE")) where = parse_or(lex);
        lex.expect_punct(";");
        std::vector<Row> rows;
        for (const auto& r : t.rows()) {
            Row out = r;
            if (pred_eval(where, t.domain(), r))
                for (const auto& [col, v] : sets) out[t.index_of_checked(col)] = v;
            rows.push_back(std::move(out));
        }
        t = Relation::from_rows(t.domain(), std::move(rows));
        return;
    }
    fail(Err::ParseError, "expected INSERT, UPDATE or DELETE");
}

} // namespace

PredPtr sql_parse_where(const std::string& text) {
    Lexer lex(text);
    PredPtr out = parse_or(lex);
    if (lex.peek().kind != Token::Kind::End)
        fail(Err::ParseError, "trailing tokens after WHERE expression");
    return out;
}

void sql_execute(SqlDatabase& db, const std::string& script) {
    Lexer lex(script);
    while (lex.peek().kind != Token::Kind::End) exec_one(db, lex);
}

Relation sql_execute_select(const SqlDatabase& db, const std::string& stmt) {
    Lexer lex(stmt);
    lex.expect_keyword("SELECT");
    lex.expect_punct("*");
    lex.expect_keyword("FROM");
    std::string name = lex.expect_ident();
    auto it = db.find(name);
    if (it == db.end()) fail(Err::UnknownTable, "unknown table '" + name + "' in SQL");
    PredPtr where = pred_true();
    if (lex.accept_keyword("WHERE")) where = parse_or(lex);
    lex.accept_punct(";");
    return rel_select(where, it->second);
}

} // namespace relens
