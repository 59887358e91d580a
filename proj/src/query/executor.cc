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

#include "plantpulse/query/executor.h"

#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "plantpulse/domain/error.h"
#include "plantpulse/domain/schema.h"

namespace plantpulse::query {

namespace {

using Clock = std::chrono::steady_clock;
using Tuple = const std::uint32_t*;

bool integral(ColumnType t) { return t == ColumnType::kInt64 || t == ColumnType::kTimestamp; }

struct Cell {
  bool null = true;
  ColumnType type = ColumnType::kInt64;
  std::int64_t i = 0;
  double d = 0.0;
  std::string_view s;
};

Cell literal_cell(const Value& v) {
  Cell c;
  c.null = false;
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    c.i = *i;
  } else if (const auto* d = std::get_if<double>(&v)) {
    c.type = ColumnType::kDecimal;
    c.d = *d;
  } else if (const auto* s = std::get_if<std::string>(&v)) {
    c.type = ColumnType::kText;
    c.s = *s;
  } else {
    c.null = true;
  }
  return c;
}

long double as_number(const Cell& c) {
  return integral(c.type) ? static_cast<long double>(c.i) : static_cast<long double>(c.d);
}

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

// Both cells non-null and of comparable types.
int compare(const Cell& a, const Cell& b) {
  if (a.type == ColumnType::kText) return three_way(a.s, b.s);
  if (integral(a.type) && integral(b.type)) return three_way(a.i, b.i);
  return three_way(as_number(a), as_number(b));
}

bool apply(CompareOp op, int cmp) {
  switch (op) {
    case CompareOp::kEq:
      return cmp == 0;
    case CompareOp::kNe:
      return cmp != 0;
    case CompareOp::kLt:
      return cmp < 0;
    case CompareOp::kLe:
      return cmp <= 0;
    case CompareOp::kGt:
      return cmp > 0;
    case CompareOp::kGe:
      return cmp >= 0;
  }
  return false;
}

Value to_value(const Cell& c, ColumnType type) {
  if (c.null) return std::monostate{};
  switch (type) {
    case ColumnType::kInt64:
    case ColumnType::kTimestamp:
      return integral(c.type) ? c.i : static_cast<std::int64_t>(c.d);
    case ColumnType::kDecimal:
      return static_cast<double>(as_number(c));
    case ColumnType::kText:
      return std::string(c.s);
  }
  return std::monostate{};
}

// Nulls sort before every value.
int compare_values(const Value& a, const Value& b) {
  bool an = is_null(a);
  bool bn = is_null(b);
  if (an || bn) return three_way(!an, !bn);
  if (const auto* s = std::get_if<std::string>(&a)) return three_way(*s, std::get<std::string>(b));
  if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
    return three_way(std::get<std::int64_t>(a), std::get<std::int64_t>(b));
  }
  auto num = [](const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<long double>(*i);
    return static_cast<long double>(std::get<double>(v));
  };
  return three_way(num(a), num(b));
}

class Guard {
 public:
  explicit Guard(const ExecOptions& options)
      : max_rows_(options.max_intermediate_rows), deadline_(Clock::now() + options.timeout) {}

  void tick() {
    if (++ticks_ % 4096 == 0 && Clock::now() > deadline_) {
      throw ResourceExhausted("query exceeded its time limit");
    }
  }

  void rows(std::uint64_t n) const {
    if (n > max_rows_) {
      throw ResourceExhausted("query aborted: intermediate result exceeds " +
                              std::to_string(max_rows_) + " rows");
    }
  }

 private:
  std::uint64_t max_rows_;
  Clock::time_point deadline_;
  std::uint64_t ticks_ = 0;
};

class Data {
 public:
  std::vector<store::ColumnBatch> batches;

  Cell cell(const BoundColumn& c, Tuple tuple) const {
    const store::ColumnVector& v = batches[c.table].columns[c.slot];
    std::size_t r = tuple[c.table];
    Cell out;
    out.type = v.type;
    if (v.null_at(r)) return out;
    out.null = false;
    switch (v.type) {
      case ColumnType::kInt64:
      case ColumnType::kTimestamp:
        out.i = v.ints[r];
        break;
      case ColumnType::kDecimal:
        out.d = v.decimals[r];
        break;
      case ColumnType::kText:
        out.s = v.texts[r];
        break;
    }
    return out;
  }

  Cell operand(const BoundOperand& o, Tuple tuple) const {
    return o.column ? cell(*o.column, tuple) : literal_cell(o.literal);
  }

  bool eval(const BoundPredicate& p, Tuple tuple) const {
    switch (p.kind) {
      case PredKind::kAnd:
        for (const auto& c : p.children) {
          if (!eval(c, tuple)) return false;
        }
        return true;
      case PredKind::kOr:
        for (const auto& c : p.children) {
          if (eval(c, tuple)) return true;
        }
        return false;
      case PredKind::kIsNull:
        return cell(p.column, tuple).null;
      case PredKind::kIsNotNull:
        return !cell(p.column, tuple).null;
      case PredKind::kCompare: {
        Cell a = cell(p.column, tuple);
        Cell b = operand(p.operands[0], tuple);
        return !a.null && !b.null && apply(p.op, compare(a, b));
      }
      case PredKind::kBetween: {
        Cell a = cell(p.column, tuple);
        Cell lo = operand(p.operands[0], tuple);
        Cell hi = operand(p.operands[1], tuple);
        return !a.null && !lo.null && !hi.null && compare(a, lo) >= 0 && compare(a, hi) <= 0;
      }
    }
    return false;
  }
};

enum class KeyMode { kInt, kDouble, kText };

void append_raw(std::string& key, const void* p, std::size_t n) {
  key.append(static_cast<const char*>(p), n);
}

// Appends c to key in the given mode; false when c is null.
bool encode(std::string& key, const Cell& c, KeyMode mode) {
  if (c.null) return false;
  switch (mode) {
    case KeyMode::kInt:
      append_raw(key, &c.i, sizeof c.i);
      break;
    case KeyMode::kDouble: {
      double d = static_cast<double>(as_number(c));
      if (d == 0.0) d = 0.0;
      append_raw(key, &d, sizeof d);
      break;
    }
    case KeyMode::kText: {
      auto n = static_cast<std::uint32_t>(c.s.size());
      append_raw(key, &n, sizeof n);
      key.append(c.s);
      break;
    }
  }
  return true;
}

KeyMode key_mode(const EqualityKey& k) {
  if (k.build.type == ColumnType::kText) return KeyMode::kText;
  if (integral(k.build.type) && integral(k.probe.type)) return KeyMode::kInt;
  return KeyMode::kDouble;
}

struct Interval {
  std::int64_t lo;
  std::int64_t hi;
  std::uint32_t row;
};

struct Partition {
  std::vector<std::uint32_t> rows;
  std::vector<std::pair<std::int64_t, std::uint32_t>> points;
  std::vector<Interval> intervals;
  std::int64_t max_length = 0;
};

class Executor {
 public:
  Executor(const Plan& plan, const store::Store& store, const store::Snapshot& snap,
           const ExecOptions& options)
      : plan_(plan), store_(store), snap_(snap), guard_(options) {}

  ResultTable run() {
    const std::size_t n = plan_.tables.size();
    data_.batches.reserve(n);
    std::vector<std::vector<std::uint32_t>> selections(n);
    std::vector<std::uint32_t> scratch(n);
    for (std::size_t t = 0; t < n; ++t) {
      const PlanTable& pt = plan_.tables[t];
      data_.batches.push_back(store_.scan(snap_, pt.name, pt.columns, pt.pushed));
      auto rows = static_cast<std::uint32_t>(data_.batches[t].rows());
      for (std::uint32_t r = 0; r < rows; ++r) {
        guard_.tick();
        scratch[t] = r;
        bool keep = std::all_of(pt.filters.begin(), pt.filters.end(),
                                [&](const BoundPredicate& p) { return data_.eval(p, scratch.data()); });
        if (keep) selections[t].push_back(r);
      }
    }

    Sink sink(*this, n);
    std::vector<std::uint32_t> tuples = std::move(selections[0]);
    std::size_t width = 1;
    if (plan_.joins.empty()) {
      for (std::uint32_t r : tuples) {
        guard_.tick();
        sink.add(&r);
      }
      return finish(sink);
    }
    for (std::size_t j = 0; j + 1 < plan_.joins.size(); ++j) {
      std::vector<std::uint32_t> next;
      std::uint64_t produced = 0;
      join(tuples, width, plan_.joins[j], selections[j + 1], [&](const std::uint32_t* t) {
        guard_.rows(++produced);
        next.insert(next.end(), t, t + width + 1);
      });
      tuples = std::move(next);
      ++width;
    }
    std::uint64_t produced = 0;
    join(tuples, width, plan_.joins.back(), selections.back(), [&](const std::uint32_t* t) {
      guard_.rows(++produced);
      sink.add(t);
    });
    return finish(sink);
  }

 private:
  // Calls emit with every joined tuple of width + 1 entries, in probe order
  // then ascending build row.
  template <typename Emit>
  void join(const std::vector<std::uint32_t>& left, std::size_t width, const JoinStep& step,
            const std::vector<std::uint32_t>& build, Emit&& emit) {
    const std::size_t bt = width;  // table index being joined
    std::vector<KeyMode> modes;
    for (const auto& k : step.keys) modes.push_back(key_mode(k));

    std::vector<std::uint32_t> tuple(width + 1);
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<Partition> parts;
    std::string key;
    for (std::uint32_t row : build) {
      guard_.tick();
      tuple[bt] = row;
      key.clear();
      bool ok = true;
      for (std::size_t k = 0; k < step.keys.size() && ok; ++k) {
        ok = encode(key, data_.cell(step.keys[k].build, tuple.data()), modes[k]);
      }
      if (!ok) continue;
      auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(parts.size()));
      if (inserted) parts.emplace_back();
      Partition& part = parts[it->second];
      if (!step.interval) {
        part.rows.push_back(row);
      } else if (step.interval->build_holds_point) {
        Cell p = data_.cell(step.interval->point, tuple.data());
        if (!p.null) part.points.emplace_back(p.i, row);
      } else {
        Cell lo = data_.cell(step.interval->lo, tuple.data());
        Cell hi = data_.cell(step.interval->hi, tuple.data());
        if (lo.null || hi.null || hi.i < lo.i) continue;
        part.intervals.push_back({lo.i, hi.i, row});
        part.max_length = std::max(part.max_length, hi.i - lo.i);
      }
    }
    for (auto& part : parts) {
      std::sort(part.points.begin(), part.points.end());
      std::sort(part.intervals.begin(), part.intervals.end(), [](const Interval& a, const Interval& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.row < b.row;
      });
    }

    std::vector<std::uint32_t> candidates;
    const std::size_t count = width ? left.size() / width : 0;
    for (std::size_t i = 0; i < count; ++i) {
      guard_.tick();
      std::copy_n(left.begin() + static_cast<std::ptrdiff_t>(i * width), width, tuple.begin());
      key.clear();
      bool ok = true;
      for (std::size_t k = 0; k < step.keys.size() && ok; ++k) {
        ok = encode(key, data_.cell(step.keys[k].probe, tuple.data()), modes[k]);
      }
      if (!ok) continue;
      auto it = index.find(key);
      if (it == index.end()) continue;
      const Partition& part = parts[it->second];

      const std::vector<std::uint32_t>* rows = &part.rows;
      if (step.interval) {
        candidates.clear();
        rows = &candidates;
        if (step.interval->build_holds_point) {
          Cell lo = data_.cell(step.interval->lo, tuple.data());
          Cell hi = data_.cell(step.interval->hi, tuple.data());
          if (lo.null || hi.null) continue;
          auto first = std::lower_bound(part.points.begin(), part.points.end(),
                                        std::pair<std::int64_t, std::uint32_t>{lo.i, 0});
          for (auto p = first; p != part.points.end() && p->first <= hi.i; ++p) {
            candidates.push_back(p->second);
          }
        } else {
          Cell p = data_.cell(step.interval->point, tuple.data());
          if (p.null) continue;
          std::int64_t from = p.i - part.max_length;
          auto first = std::lower_bound(part.intervals.begin(), part.intervals.end(), from,
                                        [](const Interval& a, std::int64_t v) { return a.lo < v; });
          for (auto c = first; c != part.intervals.end() && c->lo <= p.i; ++c) {
            guard_.tick();
            if (c->hi >= p.i) candidates.push_back(c->row);
          }
        }
        if (!std::is_sorted(candidates.begin(), candidates.end())) {
          std::sort(candidates.begin(), candidates.end());
        }
      }

      for (std::uint32_t row : *rows) {
        guard_.tick();
        tuple[bt] = row;
        bool keep = std::all_of(step.residuals.begin(), step.residuals.end(),
                                [&](const BoundPredicate& p) { return data_.eval(p, tuple.data()); });
        if (keep) emit(tuple.data());
      }
    }
  }

  struct Accumulator {
    std::uint64_t count = 0;
    std::int64_t int_sum = 0;
    long double sum = 0;
    Cell best;
  };

  struct Group {
    std::vector<std::uint32_t> first;  // tuple that opened the group
    std::vector<Accumulator> acc;
  };

  void accumulate(Accumulator& a, const OutputExpr& e, Tuple tuple) const {
    if (!e.column) {
      ++a.count;
      return;
    }
    Cell c = data_.cell(*e.column, tuple);
    if (c.null) return;
    ++a.count;
    switch (e.fn) {
      case AggFn::kCount:
        break;
      case AggFn::kAvg:
      case AggFn::kSum:
        if (integral(c.type)) a.int_sum += c.i;
        a.sum += as_number(c);
        break;
      case AggFn::kMin:
        if (a.best.null || compare(c, a.best) < 0) a.best = c;
        break;
      case AggFn::kMax:
        if (a.best.null || compare(c, a.best) > 0) a.best = c;
        break;
    }
  }

  Value aggregate_value(const Accumulator& a, const OutputExpr& e) const {
    switch (e.fn) {
      case AggFn::kCount:
        return static_cast<std::int64_t>(a.count);
      case AggFn::kAvg:
        if (a.count == 0) return std::monostate{};
        return static_cast<double>(a.sum / static_cast<long double>(a.count));
      case AggFn::kSum:
        if (a.count == 0) return std::monostate{};
        if (e.type == ColumnType::kInt64) return a.int_sum;
        return static_cast<double>(a.sum);
      case AggFn::kMin:
      case AggFn::kMax:
        return to_value(a.best, e.type);
    }
    return std::monostate{};
  }

  // Consumes final tuples: output rows directly, or per-group accumulators.
  class Sink {
   public:
    Sink(Executor& ex, std::size_t width) : ex_(ex), width_(width) {
      for (const auto& g : ex_.plan_.group_by) {
        if (std::find(key_tables_.begin(), key_tables_.end(), g.table) == key_tables_.end()) {
          key_tables_.push_back(g.table);
        }
      }
    }

    void add(const std::uint32_t* tuple) {
      const Plan& plan = ex_.plan_;
      if (!plan.aggregate) {
        Row row;
        row.reserve(plan.exprs.size());
        for (const auto& e : plan.exprs) row.push_back(to_value(ex_.data_.cell(*e.column, tuple), e.type));
        rows_.push_back(std::move(row));
        return;
      }
      Group& g = groups_[group_of(tuple)];
      for (std::size_t e = 0; e < plan.exprs.size(); ++e) {
        if (plan.exprs[e].aggregate) ex_.accumulate(g.acc[e], plan.exprs[e], tuple);
      }
    }

    std::vector<Row> take() {
      const Plan& plan = ex_.plan_;
      if (!plan.aggregate) return std::move(rows_);
      if (plan.group_by.empty() && groups_.empty()) {
        groups_.push_back({std::vector<std::uint32_t>(width_), std::vector<Accumulator>(plan.exprs.size())});
      }
      std::vector<Row> out;
      for (const auto& g : groups_) {
        Row row;
        for (std::size_t e = 0; e < plan.exprs.size(); ++e) {
          const OutputExpr& x = plan.exprs[e];
          if (x.aggregate) {
            row.push_back(ex_.aggregate_value(g.acc[e], x));
          } else {
            row.push_back(to_value(ex_.data_.cell(*x.column, g.first.data()), x.type));
          }
        }
        out.push_back(std::move(row));
      }
      return out;
    }

   private:
    std::size_t group_of(const std::uint32_t* tuple) {
      bool same = have_last_;
      for (std::size_t i = 0; same && i < key_tables_.size(); ++i) {
        same = last_[key_tables_[i]] == tuple[key_tables_[i]];
      }
      if (same) return last_group_;
      key_.clear();
      for (const auto& g : ex_.plan_.group_by) {
        Cell c = ex_.data_.cell(g, tuple);
        key_.push_back(c.null ? '\0' : '\1');
        KeyMode mode = g.type == ColumnType::kText      ? KeyMode::kText
                       : g.type == ColumnType::kDecimal ? KeyMode::kDouble
                                                        : KeyMode::kInt;
        encode(key_, c, mode);
      }
      auto [it, inserted] = index_.try_emplace(key_, groups_.size());
      if (inserted) {
        groups_.push_back({std::vector<std::uint32_t>(tuple, tuple + width_),
                           std::vector<Accumulator>(ex_.plan_.exprs.size())});
      }
      last_.assign(tuple, tuple + width_);
      have_last_ = true;
      last_group_ = it->second;
      return last_group_;
    }

    Executor& ex_;
    std::size_t width_;
    std::vector<std::size_t> key_tables_;
    std::vector<Row> rows_;
    std::vector<Group> groups_;
    std::unordered_map<std::string, std::size_t> index_;
    std::string key_;
    std::vector<std::uint32_t> last_;
    bool have_last_ = false;
    std::size_t last_group_ = 0;
  };

  ResultTable finish(Sink& sink) {
    std::vector<Row> rows = sink.take();

    if (!plan_.order.empty()) {
      std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        for (const auto& k : plan_.order) {
          int c = compare_values(a[k.expr], b[k.expr]);
          if (c != 0) return k.descending ? c > 0 : c < 0;
        }
        return false;
      });
    }
    if (plan_.limit && rows.size() > static_cast<std::uint64_t>(*plan_.limit)) {
      rows.resize(static_cast<std::size_t>(*plan_.limit));
    }
    for (auto& r : rows) r.resize(plan_.columns.size());

    ResultTable result;
    result.columns = plan_.columns;
    result.rows = std::move(rows);
    return result;
  }

  const Plan& plan_;
  const store::Store& store_;
  const store::Snapshot& snap_;
  Guard guard_;
  Data data_;
};

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

ResultTable execute(const Plan& plan, const store::Store& store, const store::Snapshot& snap,
                    const ExecOptions& options) {
  auto start = Clock::now();
  ResultTable result = Executor(plan, store, snap, options).run();
  result.elapsed_ms = millis_since(start);
  return result;
}

ResultTable execute_sql(std::string_view sql, const store::Store& store,
                        const store::Snapshot& snap, const ExecOptions& options) {
  auto start = Clock::now();
  Plan p = plan(parse(sql), store.catalog());
  ResultTable result = Executor(p, store, snap, options).run();
  result.elapsed_ms = millis_since(start);
  return result;
}

std::vector<ReadingMatch> vertical_join(const store::Store& store, const store::Snapshot& snap,
                                        std::optional<EntityId> workplace,
                                        std::string_view measurement_column) {
  const TableSchema& sensor = store.schema(tables::kSensorData);
  int mc = sensor.column_index(measurement_column);
  if (mc < 0 || sensor.columns[static_cast<std::size_t>(mc)].type != ColumnType::kDecimal) {
    throw InvalidArgument("not a measurement column: " + std::string(measurement_column));
  }
  using store::ScanPredicate;
  std::vector<ScanPredicate> reading_filter{{std::string(measurement_column),
                                             ScanPredicate::Kind::kIsNotNull, {}, {}, {}}};
  std::vector<ScanPredicate> position_filter{
      {"LEFT_AT", ScanPredicate::Kind::kIsNotNull, {}, {}, {}}};
  if (workplace) {
    auto w = static_cast<std::int64_t>(workplace->value);
    reading_filter.push_back({"WORKPLACE_ID", ScanPredicate::Kind::kCompare, CompareOp::kEq, w, {}});
    position_filter.push_back({"WORKPLACE_ID", ScanPredicate::Kind::kCompare, CompareOp::kEq, w, {}});
  }
  const std::vector<std::string> reading_cols{"ID", "WORKPLACE_ID", "DATE"};
  const std::vector<std::string> position_cols{"ID", "WORKPLACE_ID", "ENTERED_AT", "LEFT_AT"};
  auto readings = store.scan(snap, tables::kSensorData, reading_cols, reading_filter);
  auto positions = store.scan(snap, tables::kProductionOrderPosition, position_cols, position_filter);

  struct Span {
    std::int64_t entered;
    std::int64_t left;
    std::uint64_t id;
  };
  struct Bucket {
    std::vector<Span> spans;
    std::int64_t max_length = 0;
  };
  std::unordered_map<std::int64_t, Bucket> by_workplace;
  const auto& pw = positions.columns[1];
  const auto& pe = positions.columns[2];
  const auto& pl = positions.columns[3];
  for (std::size_t i = 0; i < positions.rows(); ++i) {
    if (pe.null_at(i) || pl.ints[i] < pe.ints[i]) continue;
    Bucket& b = by_workplace[pw.ints[i]];
    b.spans.push_back({pe.ints[i], pl.ints[i], static_cast<std::uint64_t>(positions.columns[0].ints[i])});
    b.max_length = std::max(b.max_length, pl.ints[i] - pe.ints[i]);
  }
  for (auto& [_, b] : by_workplace) {
    std::sort(b.spans.begin(), b.spans.end(),
              [](const Span& a, const Span& c) { return a.entered < c.entered; });
  }

  std::vector<ReadingMatch> out;
  const auto& rw = readings.columns[1];
  const auto& rd = readings.columns[2];
  for (std::size_t i = 0; i < readings.rows(); ++i) {
    auto it = by_workplace.find(rw.ints[i]);
    if (it == by_workplace.end()) continue;
    const Bucket& b = it->second;
    std::int64_t t = rd.ints[i];
    auto first = std::lower_bound(b.spans.begin(), b.spans.end(), t - b.max_length,
                                  [](const Span& s, std::int64_t v) { return s.entered < v; });
    auto reading = static_cast<std::uint64_t>(readings.columns[0].ints[i]);
    for (auto s = first; s != b.spans.end() && s->entered <= t; ++s) {
      if (s->left >= t) out.push_back({reading, s->id});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace plantpulse::query
