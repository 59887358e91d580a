// Copyright 2026 The PlantPulse Authors
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

#include <cctype>
#include <charconv>
#include <cmath>

#include "plantpulse/domain/error.h"
#include "plantpulse/query/ast.h"

namespace plantpulse::query {

std::string_view to_string(AggFn fn) {
  switch (fn) {
    case AggFn::kAvg:
      return "AVG";
    case AggFn::kSum:
      return "SUM";
    case AggFn::kMin:
      return "MIN";
    case AggFn::kMax:
      return "MAX";
    case AggFn::kCount:
      return "COUNT";
  }
  return "?";
}

namespace {

enum class Tok { kIdent, kNumber, kString, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // identifiers upper-cased, symbols verbatim
  std::size_t offset = 0;
  std::variant<std::int64_t, double, std::string> literal;
};

constexpr std::string_view kReserved[] = {
    "SELECT", "FROM", "JOIN", "ON",  "WHERE", "GROUP", "BY",   "ORDER", "LIMIT", "AS",
    "AND",    "OR",   "BETWEEN", "IS", "NOT", "NULL", "ASC", "DESC"};

bool reserved(std::string_view word) {
  for (auto r : kReserved) {
    if (r == word) return true;
  }
  return false;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd:
      return "end of input";
    case Tok::kString:
      return "string literal";
    default:
      return "'" + t.text + "'";
  }
}

[[noreturn]] void fail(std::size_t offset, const std::string& message) {
  throw SyntaxError("syntax error at offset " + std::to_string(offset) + ": " + message, offset);
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) {
    return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]));
  };
  while (true) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    Token t;
    t.offset = i;
    if (i == s.size()) {
      out.push_back(t);
      return out;
    }
    char c = s[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      t.kind = Tok::kIdent;
      for (char ch : s.substr(b, i - b)) {
        t.text += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      }
    } else if (digit(i) || (c == '-' && digit(i + 1)) || (c == '.' && digit(i + 1))) {
      std::size_t b = i;
      if (c == '-') ++i;
      bool integral = true;
      while (digit(i)) ++i;
      if (i < s.size() && s[i] == '.') {
        integral = false;
        ++i;
        if (!digit(i)) fail(i, "expected digits after decimal point");
        while (digit(i)) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        integral = false;
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        if (!digit(i)) fail(i, "expected exponent digits");
        while (digit(i)) ++i;
      }
      if (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        fail(i, "unexpected character after number");
      }
      t.kind = Tok::kNumber;
      t.text = std::string(s.substr(b, i - b));
      const char* first = s.data() + b;
      const char* last = s.data() + i;
      if (integral) {
        std::int64_t v = 0;
        auto r = std::from_chars(first, last, v);
        if (r.ec != std::errc() || r.ptr != last) fail(b, "integer literal out of range");
        t.literal = v;
      } else {
        double v = 0;
        auto r = std::from_chars(first, last, v);
        if (r.ec != std::errc() || r.ptr != last || !std::isfinite(v)) {
          fail(b, "decimal literal out of range");
        }
        t.literal = v;
      }
    } else if (c == '\'') {
      std::string value;
      ++i;
      while (true) {
        if (i >= s.size()) fail(t.offset, "unterminated string literal");
        if (s[i] == '\'') {
          if (i + 1 < s.size() && s[i + 1] == '\'') {
            value += '\'';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value += s[i++];
      }
      t.kind = Tok::kString;
      t.text = value;
      t.literal = std::move(value);
    } else {
      static constexpr std::string_view kTwo[] = {"<=", ">=", "<>"};
      t.kind = Tok::kSymbol;
      for (auto two : kTwo) {
        if (s.substr(i, 2) == two) t.text = std::string(two);
      }
      if (t.text.empty()) {
        if (std::string_view("=<>(),.*;").find(c) == std::string_view::npos) {
          fail(i, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
      i += t.text.size();
    }
    out.push_back(std::move(t));
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Query query() {
    Query q;
    expect_word("SELECT");
    q.select.push_back(select_item());
    while (accept_symbol(",")) q.select.push_back(select_item());
    expect_word("FROM");
    q.from = table_ref();
    while (accept_word("JOIN")) {
      Join j;
      j.table = table_ref();
      expect_word("ON");
      j.on.push_back(comparison());
      while (accept_word("AND")) j.on.push_back(comparison());
      q.joins.push_back(std::move(j));
    }
    if (accept_word("WHERE")) q.where = disjunction();
    if (accept_word("GROUP")) {
      expect_word("BY");
      q.group_by.push_back(column());
      while (accept_symbol(",")) q.group_by.push_back(column());
    }
    if (accept_word("ORDER")) {
      expect_word("BY");
      do {
        OrderItem item{expr(), false};
        if (accept_word("DESC")) {
          item.descending = true;
        } else {
          accept_word("ASC");
        }
        q.order_by.push_back(std::move(item));
      } while (accept_symbol(","));
    }
    if (accept_word("LIMIT")) {
      const Token& t = peek();
      if (t.kind != Tok::kNumber || !std::holds_alternative<std::int64_t>(t.literal) ||
          std::get<std::int64_t>(t.literal) < 0) {
        fail(t.offset, "expected a non-negative integer after LIMIT, found " + describe(t));
      }
      q.limit = std::get<std::int64_t>(t.literal);
      ++pos_;
    }
    accept_symbol(";");
    if (peek().kind != Tok::kEnd) fail(peek().offset, "unexpected " + describe(peek()));
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kIdent && peek(ahead).text == w;
  }
  bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kSymbol && peek(ahead).text == s;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    ++pos_;
    return true;
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    ++pos_;
    return true;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail(peek().offset, "expected " + std::string(w) + ", found " + describe(peek()));
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) {
      fail(peek().offset, "expected '" + std::string(s) + "', found " + describe(peek()));
    }
  }

  std::string identifier(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || reserved(t.text)) {
      fail(t.offset, std::string("expected ") + what + ", found " + describe(t));
    }
    ++pos_;
    return t.text;
  }

  TableRef table_ref() {
    TableRef t;
    t.pos.offset = peek().offset;
    t.name = identifier("table name");
    if (peek().kind == Tok::kIdent && !reserved(peek().text)) t.alias = identifier("alias");
    return t;
  }

  ColumnRef column() {
    ColumnRef c;
    c.pos.offset = peek().offset;
    c.name = identifier("column");
    if (accept_symbol(".")) {
      c.qualifier = std::move(c.name);
      c.name = identifier("column");
    }
    return c;
  }

  static std::optional<AggFn> aggregate_name(std::string_view w) {
    if (w == "AVG") return AggFn::kAvg;
    if (w == "SUM") return AggFn::kSum;
    if (w == "MIN") return AggFn::kMin;
    if (w == "MAX") return AggFn::kMax;
    if (w == "COUNT") return AggFn::kCount;
    return std::nullopt;
  }

  Expr expr() {
    if (peek().kind == Tok::kIdent && is_symbol("(", 1)) {
      auto fn = aggregate_name(peek().text);
      if (!fn) fail(peek().offset, "unknown function " + peek().text);
      Aggregate a;
      a.fn = *fn;
      a.pos.offset = peek().offset;
      pos_ += 2;
      if (!accept_symbol("*")) a.arg = column();
      expect_symbol(")");
      return a;
    }
    return column();
  }

  SelectItem select_item() {
    SelectItem item{expr(), {}};
    if (accept_word("AS")) item.alias = identifier("alias");
    return item;
  }

  Operand operand() {
    const Token& t = peek();
    if (t.kind == Tok::kNumber || t.kind == Tok::kString) {
      ++pos_;
      return Literal{t.literal, SourcePos{t.offset}};
    }
    if (t.kind == Tok::kIdent && !reserved(t.text)) return column();
    fail(t.offset, "expected a value, found " + describe(t));
  }

  Predicate comparison() {
    Predicate p;
    p.column = column();
    const Token& t = peek();
    if (t.kind == Tok::kSymbol) {
      static const std::pair<std::string_view, CompareOp> kOps[] = {
          {"=", CompareOp::kEq}, {"<>", CompareOp::kNe}, {"<", CompareOp::kLt},
          {"<=", CompareOp::kLe}, {">", CompareOp::kGt}, {">=", CompareOp::kGe}};
      for (const auto& [text, op] : kOps) {
        if (t.text == text) {
          ++pos_;
          p.kind = PredKind::kCompare;
          p.op = op;
          p.operands.push_back(operand());
          return p;
        }
      }
    }
    if (accept_word("BETWEEN")) {
      p.kind = PredKind::kBetween;
      p.operands.push_back(operand());
      expect_word("AND");
      p.operands.push_back(operand());
      return p;
    }
    if (accept_word("IS")) {
      p.kind = accept_word("NOT") ? PredKind::kIsNotNull : PredKind::kIsNull;
      expect_word("NULL");
      return p;
    }
    fail(t.offset, "expected comparison operator, BETWEEN or IS, found " + describe(t));
  }

  Predicate disjunction() {
    Predicate first = conjunction();
    if (!is_word("OR")) return first;
    Predicate p;
    p.kind = PredKind::kOr;
    p.children.push_back(std::move(first));
    while (accept_word("OR")) p.children.push_back(conjunction());
    return p;
  }

  Predicate conjunction() {
    Predicate first = term();
    if (!is_word("AND")) return first;
    Predicate p;
    p.kind = PredKind::kAnd;
    p.children.push_back(std::move(first));
    while (accept_word("AND")) p.children.push_back(term());
    return p;
  }

  Predicate term() {
    if (accept_symbol("(")) {
      Predicate p = disjunction();
      expect_symbol(")");
      return p;
    }
    return comparison();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string print_column(const ColumnRef& c) {
  return c.qualifier.empty() ? c.name : c.qualifier + "." + c.name;
}

std::string print_literal(const Literal& l) {
  if (const auto* i = std::get_if<std::int64_t>(&l.value)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&l.value)) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, *d);
    std::string out(buf, r.ptr);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
  }
  std::string out = "'";
  for (char c : std::get<std::string>(l.value)) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string print_operand(const Operand& o) {
  if (const auto* c = std::get_if<ColumnRef>(&o)) return print_column(*c);
  return print_literal(std::get<Literal>(o));
}

}  // namespace

Query parse(std::string_view sql) { return Parser(lex(sql)).query(); }

std::string print(const Expr& e) {
  if (const auto* c = std::get_if<ColumnRef>(&e)) return print_column(*c);
  const auto& a = std::get<Aggregate>(e);
  return std::string(to_string(a.fn)) + "(" + (a.arg ? print_column(*a.arg) : "*") + ")";
}

std::string print(const Predicate& p) {
  switch (p.kind) {
    case PredKind::kCompare:
      return print_column(p.column) + " " + std::string(store::to_string(p.op)) + " " +
             print_operand(p.operands.at(0));
    case PredKind::kBetween:
      return print_column(p.column) + " BETWEEN " + print_operand(p.operands.at(0)) + " AND " +
             print_operand(p.operands.at(1));
    case PredKind::kIsNull:
      return print_column(p.column) + " IS NULL";
    case PredKind::kIsNotNull:
      return print_column(p.column) + " IS NOT NULL";
    case PredKind::kAnd:
    case PredKind::kOr: {
      std::string out;
      for (const auto& child : p.children) {
        if (!out.empty()) out += p.kind == PredKind::kAnd ? " AND " : " OR ";
        bool nested = child.kind == PredKind::kAnd || child.kind == PredKind::kOr;
        out += nested ? "(" + print(child) + ")" : print(child);
      }
      return out;
    }
  }
  return {};
}

std::string print(const Query& q) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < q.select.size(); ++i) {
    if (i) out += ", ";
    out += print(q.select[i].expr);
    if (!q.select[i].alias.empty()) out += " AS " + q.select[i].alias;
  }
  auto table = [](const TableRef& t) { return t.alias.empty() ? t.name : t.name + " " + t.alias; };
  out += " FROM " + table(q.from);
  for (const auto& j : q.joins) {
    out += " JOIN " + table(j.table) + " ON ";
    for (std::size_t i = 0; i < j.on.size(); ++i) {
      if (i) out += " AND ";
      out += print(j.on[i]);
    }
  }
  if (q.where) out += " WHERE " + print(*q.where);
  if (!q.group_by.empty()) {
    out += " GROUP BY ";
    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
      if (i) out += ", ";
      out += print_column(q.group_by[i]);
    }
  }
  if (!q.order_by.empty()) {
    out += " ORDER BY ";
    for (std::size_t i = 0; i < q.order_by.size(); ++i) {
      if (i) out += ", ";
      out += print(q.order_by[i].expr);
      if (q.order_by[i].descending) out += " DESC";
    }
  }
  if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
  return out;
}

}  // namespace plantpulse::query
