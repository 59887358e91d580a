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

#include "plantpulse/query/planner.h"

#include <algorithm>
#include <bit>

#include "plantpulse/domain/error.h"

namespace plantpulse::query {

namespace {

bool is_text(ColumnType t) { return t == ColumnType::kText; }
bool is_integral(ColumnType t) { return t == ColumnType::kInt64 || t == ColumnType::kTimestamp; }
bool is_numeric(ColumnType t) { return t == ColumnType::kInt64 || t == ColumnType::kDecimal; }

[[noreturn]] void fail(const SourcePos& pos, const std::string& message) {
  throw SemanticError(message, pos.offset);
}

std::string column_text(const ColumnRef& c) {
  return c.qualifier.empty() ? c.name : c.qualifier + "." + c.name;
}

Value literal_value(const Literal& l) {
  return std::visit([](const auto& v) -> Value { return v; }, l.value);
}

ColumnType literal_type(const Literal& l) {
  if (std::holds_alternative<std::string>(l.value)) return ColumnType::kText;
  if (std::holds_alternative<double>(l.value)) return ColumnType::kDecimal;
  return ColumnType::kInt64;
}

struct BoundConjunct {
  BoundPredicate pred;
  std::uint64_t tables = 0;  // bitmask of referenced plan tables
};

class Planner {
 public:
  Planner(const Query& q, const SchemaCatalog& catalog) : q_(q), catalog_(catalog) {}

  Plan run() {
    add_table(q_.from);
    for (const auto& j : q_.joins) add_table(j.table);
    plan_.joins.resize(q_.joins.size());

    std::vector<BoundConjunct> conjuncts;
    for (std::size_t i = 0; i < q_.joins.size(); ++i) {
      for (const auto& p : q_.joins[i].on) conjuncts.push_back(bind_conjunct(p, i + 2));
    }
    if (q_.where) {
      if (q_.where->kind == PredKind::kAnd) {
        for (const auto& p : q_.where->children) conjuncts.push_back(bind_conjunct(p, schemas_.size()));
      } else {
        conjuncts.push_back(bind_conjunct(*q_.where, schemas_.size()));
      }
    }
    for (auto& c : conjuncts) place(std::move(c));

    outputs();
    plan_.limit = q_.limit;
    return std::move(plan_);
  }

 private:
  void add_table(const TableRef& ref) {
    const TableSchema* schema = catalog_.find(ref.name);
    if (!schema) fail(ref.pos, "unknown table " + ref.name);
    std::string alias = ref.alias.empty() ? ref.name : ref.alias;
    for (const auto& t : plan_.tables) {
      if (t.alias == alias) fail(ref.pos, "duplicate table alias " + alias);
    }
    if (plan_.tables.size() == 64) fail(ref.pos, "too many tables");
    schemas_.push_back(schema);
    slots_.emplace_back(schema->columns.size(), -1);
    plan_.tables.push_back({ref.name, alias, {}, {}, {}});
  }

  BoundColumn bind(const ColumnRef& c, std::size_t scope) {
    std::size_t table = scope;
    int index = -1;
    if (!c.qualifier.empty()) {
      for (std::size_t t = 0; t < scope; ++t) {
        if (plan_.tables[t].alias == c.qualifier) table = t;
      }
      if (table == scope) fail(c.pos, "unknown table alias " + c.qualifier);
      index = schemas_[table]->column_index(c.name);
      if (index < 0) fail(c.pos, "unknown column " + column_text(c));
    } else {
      for (std::size_t t = 0; t < scope; ++t) {
        int i = schemas_[t]->column_index(c.name);
        if (i < 0) continue;
        if (index >= 0) fail(c.pos, "ambiguous column " + c.name);
        table = t;
        index = i;
      }
      if (index < 0) fail(c.pos, "unknown column " + c.name);
    }
    auto col = static_cast<std::size_t>(index);
    int& slot = slots_[table][col];
    if (slot < 0) {
      slot = static_cast<int>(plan_.tables[table].columns.size());
      plan_.tables[table].columns.push_back(schemas_[table]->columns[col].name);
    }
    return {table, static_cast<std::size_t>(slot), schemas_[table]->columns[col].type};
  }

  void check_comparable(const ColumnRef& at, ColumnType a, ColumnType b) {
    if (is_text(a) != is_text(b)) {
      fail(at.pos, "type mismatch: " + column_text(at) + " is " + std::string(to_string(a)) +
                       ", compared with " + std::string(to_string(b)));
    }
  }

  BoundPredicate bind_predicate(const Predicate& p, std::size_t scope, std::uint64_t& tables) {
    BoundPredicate b;
    b.kind = p.kind;
    if (p.kind == PredKind::kAnd || p.kind == PredKind::kOr) {
      for (const auto& child : p.children) b.children.push_back(bind_predicate(child, scope, tables));
      return b;
    }
    b.column = bind(p.column, scope);
    b.op = p.op;
    tables |= std::uint64_t{1} << b.column.table;
    for (const auto& operand : p.operands) {
      BoundOperand o;
      if (const auto* c = std::get_if<ColumnRef>(&operand)) {
        o.column = bind(*c, scope);
        tables |= std::uint64_t{1} << o.column->table;
        check_comparable(p.column, b.column.type, o.column->type);
      } else {
        const auto& lit = std::get<Literal>(operand);
        check_comparable(p.column, b.column.type, literal_type(lit));
        o.literal = literal_value(lit);
      }
      b.operands.push_back(std::move(o));
    }
    return b;
  }

  BoundConjunct bind_conjunct(const Predicate& p, std::size_t scope) {
    BoundConjunct c;
    c.pred = bind_predicate(p, scope, c.tables);
    return c;
  }

  static bool literal_only(const BoundPredicate& p) {
    return std::all_of(p.operands.begin(), p.operands.end(),
                       [](const BoundOperand& o) { return !o.column; });
  }

  void place(BoundConjunct c) {
    BoundPredicate& p = c.pred;
    if ((c.tables & (c.tables - 1)) == 0) {
      PlanTable& t = plan_.tables[static_cast<std::size_t>(std::countr_zero(c.tables))];
      bool leaf = p.kind != PredKind::kAnd && p.kind != PredKind::kOr;
      if (leaf && literal_only(p)) {
        store::ScanPredicate s;
        s.column = t.columns[p.column.slot];
        s.op = p.op;
        switch (p.kind) {
          case PredKind::kCompare:
            s.kind = store::ScanPredicate::Kind::kCompare;
            s.operand = p.operands[0].literal;
            break;
          case PredKind::kBetween:
            s.kind = store::ScanPredicate::Kind::kBetween;
            s.operand = p.operands[0].literal;
            s.upper = p.operands[1].literal;
            break;
          case PredKind::kIsNull:
            s.kind = store::ScanPredicate::Kind::kIsNull;
            break;
          default:
            s.kind = store::ScanPredicate::Kind::kIsNotNull;
            break;
        }
        t.pushed.push_back(std::move(s));
      } else {
        t.filters.push_back(std::move(p));
      }
      return;
    }

    std::size_t stage = 63;
    while (!(c.tables >> stage & 1)) --stage;
    JoinStep& step = plan_.joins[stage - 1];
    if (p.kind == PredKind::kCompare && p.op == CompareOp::kEq && p.operands[0].column) {
      const BoundColumn& other = *p.operands[0].column;
      if (p.column.table == stage && other.table < stage) {
        step.keys.push_back({other, p.column});
        return;
      }
      if (other.table == stage && p.column.table < stage) {
        step.keys.push_back({p.column, other});
        return;
      }
    }
    if (p.kind == PredKind::kBetween && !step.interval && p.operands[0].column &&
        p.operands[1].column) {
      const BoundColumn& point = p.column;
      const BoundColumn& lo = *p.operands[0].column;
      const BoundColumn& hi = *p.operands[1].column;
      bool integral = is_integral(point.type) && is_integral(lo.type) && is_integral(hi.type);
      if (integral && point.table == stage && lo.table < stage && hi.table < stage) {
        step.interval = IntervalKey{true, point, lo, hi};
        return;
      }
      if (integral && point.table < stage && lo.table == stage && hi.table == stage) {
        step.interval = IntervalKey{false, point, lo, hi};
        return;
      }
    }
    step.residuals.push_back(std::move(p));
  }

  OutputExpr bind_expr(const Expr& e, std::string* name) {
    OutputExpr out;
    if (const auto* c = std::get_if<ColumnRef>(&e)) {
      out.column = bind(*c, schemas_.size());
      out.type = out.column->type;
      if (plan_.aggregate &&
          std::find(plan_.group_by.begin(), plan_.group_by.end(), *out.column) == plan_.group_by.end()) {
        fail(c->pos, "column " + column_text(*c) + " must appear in GROUP BY or be aggregated");
      }
    } else {
      const auto& a = std::get<Aggregate>(e);
      out.aggregate = true;
      out.fn = a.fn;
      if (!a.arg) {
        if (a.fn != AggFn::kCount) fail(a.pos, std::string(to_string(a.fn)) + "(*) is not supported");
        out.type = ColumnType::kInt64;
      } else {
        out.column = bind(*a.arg, schemas_.size());
        ColumnType t = out.column->type;
        switch (a.fn) {
          case AggFn::kCount:
            out.type = ColumnType::kInt64;
            break;
          case AggFn::kAvg:
          case AggFn::kSum:
            if (!is_numeric(t)) {
              fail(a.arg->pos, std::string(to_string(a.fn)) + " requires a numeric column, " +
                                   column_text(*a.arg) + " is " + std::string(to_string(t)));
            }
            out.type = a.fn == AggFn::kAvg ? ColumnType::kDecimal : t;
            break;
          case AggFn::kMin:
          case AggFn::kMax:
            out.type = t;
            break;
        }
      }
    }
    if (name) *name = print(e);
    return out;
  }

  static bool same(const OutputExpr& a, const OutputExpr& b) {
    return a.aggregate == b.aggregate && (!a.aggregate || a.fn == b.fn) && a.column == b.column;
  }

  void outputs() {
    auto has_aggregate = [](const Expr& e) { return std::holds_alternative<Aggregate>(e); };
    plan_.aggregate = !q_.group_by.empty() ||
                      std::any_of(q_.select.begin(), q_.select.end(),
                                  [&](const SelectItem& s) { return has_aggregate(s.expr); }) ||
                      std::any_of(q_.order_by.begin(), q_.order_by.end(),
                                  [&](const OrderItem& o) { return has_aggregate(o.expr); });
    for (const auto& g : q_.group_by) plan_.group_by.push_back(bind(g, schemas_.size()));

    for (const auto& item : q_.select) {
      std::string name;
      plan_.exprs.push_back(bind_expr(item.expr, &name));
      if (!item.alias.empty()) name = item.alias;
      plan_.columns.push_back({name, plan_.exprs.back().type});
    }

    for (const auto& item : q_.order_by) {
      std::optional<std::size_t> target;
      if (const auto* c = std::get_if<ColumnRef>(&item.expr); c && c->qualifier.empty()) {
        for (std::size_t i = 0; i < q_.select.size() && !target; ++i) {
          if (q_.select[i].alias == c->name) target = i;
        }
      }
      if (!target) {
        OutputExpr e = bind_expr(item.expr, nullptr);
        for (std::size_t i = 0; i < plan_.exprs.size() && !target; ++i) {
          if (same(plan_.exprs[i], e)) target = i;
        }
        if (!target) {
          target = plan_.exprs.size();
          plan_.exprs.push_back(e);
        }
      }
      plan_.order.push_back({*target, item.descending});
    }
  }

  const Query& q_;
  const SchemaCatalog& catalog_;
  Plan plan_;
  std::vector<const TableSchema*> schemas_;
  std::vector<std::vector<int>> slots_;
};

}  // namespace

Plan plan(const Query& q, const SchemaCatalog& catalog) { return Planner(q, catalog).run(); }

}  // namespace plantpulse::query
