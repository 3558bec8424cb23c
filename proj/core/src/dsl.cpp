// Copyright 2026 The histif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "histif/dsl.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "histif/error.hpp"

namespace histif {

namespace {

enum class Tok : uint8_t { kIdent, kQuoted, kNumber, kString, kSym, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::kSym, "", line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      t.kind = Tok::kIdent;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      size_t j = i;
      bool dot = false;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) ||
                                (src[j] == '.' && !dot))) {
        dot |= src[j] == '.';
        ++j;
      }
      t.kind = Tok::kNumber;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '\'' || c == '"') {
      t.kind = c == '\'' ? Tok::kString : Tok::kQuoted;
      advance(1);
      for (;;) {
        if (i >= src.size()) {
          throw ParseError("unterminated literal", t.line, t.col);
        }
        if (src[i] == c) {
          if (i + 1 < src.size() && src[i + 1] == c) {
            t.text += c;
            advance(2);
            continue;
          }
          advance(1);
          break;
        }
        t.text += src[i];
        advance(1);
      }
      if (t.kind == Tok::kQuoted && t.text.empty()) {
        throw ParseError("empty quoted identifier", t.line, t.col);
      }
    } else {
      static const char* const kTwo[] = {"<=", ">=", "!=", "<>"};
      std::string two(src.substr(i, 2));
      bool matched = false;
      for (const char* s : kTwo) {
        if (two == s) {
          t.text = two == "<>" ? "!=" : two;
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("(),=<>+-*/;").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::kEnd, "", line, col});
  return out;
}

bool same_word(const std::string& a, std::string_view kw) {
  if (a.size() != kw.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) != kw[i]) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  bool at_end() const { return peek().kind == Tok::kEnd; }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  Statement statement() {
    if (accept_kw("UPDATE")) {
      std::string rel = ident();
      expect_kw("SET");
      std::vector<std::pair<std::string, Expr>> sets;
      do {
        std::string a = ident();
        expect_sym("=");
        sets.emplace_back(a, expr());
      } while (accept_sym(","));
      Cond where = true_c();
      if (accept_kw("WHERE")) where = cond();
      return Statement::update(rel, std::move(sets), where);
    }
    if (accept_kw("DELETE")) {
      expect_kw("FROM");
      std::string rel = ident();
      Cond where = true_c();
      if (accept_kw("WHERE")) where = cond();
      return Statement::delete_(rel, where);
    }
    if (accept_kw("INSERT")) {
      expect_kw("INTO");
      std::string rel = ident();
      if (accept_kw("VALUES")) {
        expect_sym("(");
        Tuple vals;
        do {
          vals.push_back(literal());
        } while (accept_sym(","));
        expect_sym(")");
        return Statement::insert_tuple(rel, std::move(vals));
      }
      Query q = select_block();
      while (accept_kw("UNION")) q = union_(q, select_block());
      return Statement::insert_query(rel, q);
    }
    if (accept_kw("NOOP")) return Statement::noop(ident());
    fail("expected UPDATE, DELETE, INSERT or NOOP");
  }

  bool accept_sym(std::string_view s) {
    if (peek().kind == Tok::kSym && peek().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }

  Cond cond() {
    std::vector<Cond> kids{and_cond()};
    while (accept_kw("OR")) kids.push_back(and_cond());
    return or_(std::move(kids));
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept_sym("+")) {
        e = add(e, term());
      } else if (accept_sym("-")) {
        e = sub(e, term());
      } else {
        return e;
      }
    }
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }

  bool is_kw(std::string_view kw, size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kIdent && same_word(peek(ahead).text, kw);
  }

  bool accept_kw(std::string_view kw) {
    if (is_kw(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail("expected " + std::string(kw));
  }

  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) fail("expected '" + std::string(s) + "'");
  }

  std::string ident() {
    const Token& t = peek();
    if (t.kind == Tok::kQuoted) {
      ++pos_;
      return t.text;
    }
    if (t.kind == Tok::kIdent && !is_reserved_word(t.text)) {
      ++pos_;
      return t.text;
    }
    fail("expected identifier");
  }

  static std::optional<CmpOp> cmp_op(const Token& t) {
    if (t.kind != Tok::kSym) return std::nullopt;
    if (t.text == "=") return CmpOp::kEq;
    if (t.text == "!=") return CmpOp::kNe;
    if (t.text == "<") return CmpOp::kLt;
    if (t.text == "<=") return CmpOp::kLe;
    if (t.text == ">") return CmpOp::kGt;
    if (t.text == ">=") return CmpOp::kGe;
    return std::nullopt;
  }

  Query select_block() {
    expect_kw("SELECT");
    std::vector<ProjItem> items;
    bool star = accept_sym("*");
    if (!star) {
      do {
        Expr e = expr();
        std::string name;
        if (accept_kw("AS")) {
          name = ident();
        } else if (e->kind == ExprKind::kAttr) {
          name = e->name;
        } else {
          fail("computed SELECT item needs AS");
        }
        items.push_back({name, e, Type::kNull});
      } while (accept_sym(","));
    }
    expect_kw("FROM");
    Query from = base(ident());
    while (accept_sym(",")) from = join(from, base(ident()));
    if (accept_kw("WHERE")) from = select(cond(), from);
    return star ? from : project(std::move(items), from);
  }

  Cond and_cond() {
    std::vector<Cond> kids{not_cond()};
    while (accept_kw("AND")) kids.push_back(not_cond());
    return and_(std::move(kids));
  }

  Cond not_cond() {
    if (accept_kw("NOT")) return not_(not_cond());
    return primary_cond();
  }

  Cond primary_cond() {
    if ((is_kw("TRUE") || is_kw("FALSE")) && !cmp_op(peek(1))) {
      return accept_kw("TRUE") ? true_c() : (++pos_, false_c());
    }
    if (peek().kind == Tok::kSym && peek().text == "(") {
      size_t save = pos_;
      try {
        ++pos_;
        Cond c = cond();
        expect_sym(")");
        const Token& next = peek();
        bool continues =
            cmp_op(next) ||
            (next.kind == Tok::kSym && std::string_view("+-*/").find(next.text) !=
                                           std::string_view::npos) ||
            is_kw("IS") || is_kw("IN") || is_kw("BETWEEN") ||
            (is_kw("NOT") && (is_kw("IN", 1) || is_kw("BETWEEN", 1)));
        if (!continues) return c;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    Expr l = expr();
    if (accept_kw("IS")) {
      bool neg = accept_kw("NOT");
      expect_kw("NULL");
      Cond c = is_null(l);
      return neg ? not_(c) : c;
    }
    bool neg = accept_kw("NOT");
    if (accept_kw("IN")) {
      expect_sym("(");
      std::vector<Value> vals;
      do {
        vals.push_back(literal());
      } while (accept_sym(","));
      expect_sym(")");
      Cond c = in_set(l, vals);
      return neg ? not_(c) : c;
    }
    if (accept_kw("BETWEEN")) {
      Expr lo = expr();
      expect_kw("AND");
      Expr hi = expr();
      Cond c = and_(ge(l, lo), le(l, hi));
      return neg ? not_(c) : c;
    }
    if (neg) fail("expected IN or BETWEEN");
    auto op = cmp_op(peek());
    if (!op) fail("expected comparison operator");
    ++pos_;
    return cmp(*op, l, expr());
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (accept_sym("*")) {
        e = mul(e, factor());
      } else if (accept_sym("/")) {
        e = div(e, factor());
      } else {
        return e;
      }
    }
  }

  Value number(const Token& t, bool neg) {
    std::string s = (neg ? "-" : "") + t.text;
    if (t.text.find('.') != std::string::npos) {
      try {
        return Value::parse_decimal(s);
      } catch (const DataError& e) {
        throw ParseError(e.what(), t.line, t.col);
      }
    }
    return Value::integer(*BigInt::parse(s));
  }

  Value literal() {
    const Token& t = peek();
    bool neg = false;
    if (t.kind == Tok::kSym && t.text == "-") {
      neg = true;
      ++pos_;
    }
    const Token& v = peek();
    if (v.kind == Tok::kNumber) {
      ++pos_;
      return number(v, neg);
    }
    if (neg) fail("expected number");
    if (v.kind == Tok::kString) {
      ++pos_;
      return Value::text(v.text);
    }
    if (accept_kw("NULL")) return Value::null();
    if (accept_kw("TRUE")) return Value::boolean(true);
    if (accept_kw("FALSE")) return Value::boolean(false);
    fail("expected literal");
  }

  Expr factor() {
    const Token& t = peek();
    if (t.kind == Tok::kSym && t.text == "-") {
      ++pos_;
      if (peek().kind == Tok::kNumber) {
        const Token& n = peek();
        ++pos_;
        return lit(number(n, true));
      }
      return sub(lit(0), factor());
    }
    if (t.kind == Tok::kSym && t.text == "(") {
      ++pos_;
      Expr e = expr();
      expect_sym(")");
      return e;
    }
    if (t.kind == Tok::kNumber || t.kind == Tok::kString || is_kw("NULL") ||
        is_kw("TRUE") || is_kw("FALSE")) {
      return lit(literal());
    }
    if (accept_kw("CASE")) return case_tail();
    return attr(ident());
  }

  // After CASE: WHEN c THEN e {WHEN c THEN e} [ELSE e] END
  Expr case_tail() {
    expect_kw("WHEN");
    Cond c = cond();
    expect_kw("THEN");
    Expr then_e = expr();
    Expr else_e;
    if (is_kw("WHEN")) {
      else_e = case_tail();
      return case_when(c, then_e, else_e);
    }
    else_e = accept_kw("ELSE") ? expr() : lit(Value::null());
    expect_kw("END");
    return case_when(c, then_e, else_e);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Statement parse_statement(std::string_view text) {
  Parser p(text);
  Statement s = p.statement();
  p.accept_sym(";");
  p.expect_end();
  return s;
}

History parse_history(std::string_view text) {
  Parser p(text);
  History h;
  while (!p.at_end()) {
    if (p.accept_sym(";")) continue;
    h.push_back(p.statement());
  }
  return h;
}

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.expr();
  p.expect_end();
  return e;
}

Cond parse_cond(std::string_view text) {
  Parser p(text);
  Cond c = p.cond();
  p.expect_end();
  return c;
}

}  // namespace histif
