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

#include "plantpulse/store/store.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

#include "plantpulse/domain/error.h"
#include "plantpulse/domain/validate.h"
#include "plantpulse/store/chunked_array.h"

namespace plantpulse::store {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return "=";
    case CompareOp::kNe:
      return "<>";
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kGt:
      return ">";
    case CompareOp::kGe:
      return ">=";
  }
  return "?";
}

Value ColumnVector::value(std::size_t i) const {
  if (null_at(i)) return {};
  switch (type) {
    case ColumnType::kInt64:
    case ColumnType::kTimestamp:
      return ints[i];
    case ColumnType::kDecimal:
      return decimals[i];
    case ColumnType::kText:
      return std::string(texts[i]);
  }
  return {};
}

const ColumnVector& ColumnBatch::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw NotFound("column " + std::string(name) + " not in batch");
}

namespace {

constexpr std::uint64_t kLatestEpoch = UINT64_MAX;

bool is_integral(ColumnType t) { return t == ColumnType::kInt64 || t == ColumnType::kTimestamp; }

}  // namespace

// One column: typed value chunks, a validity bitmap and, for fillable
// columns, the commit epoch at which each filled cell became visible.
class Column {
 public:
  Column(const ColumnSchema& schema, std::size_t max_rows)
      : schema_(schema), validity_(max_rows / 64 + 1) {
    switch (schema.type) {
      case ColumnType::kInt64:
      case ColumnType::kTimestamp:
        ints_ = std::make_unique<ChunkedArray<std::int64_t>>(max_rows);
        break;
      case ColumnType::kDecimal:
        decimals_ = std::make_unique<ChunkedArray<double>>(max_rows);
        break;
      case ColumnType::kText:
        codes_ = std::make_unique<ChunkedArray<std::uint32_t>>(max_rows);
        dict_ = std::make_unique<ChunkedArray<std::string>>(max_rows);
        break;
    }
    if (schema.fillable) {
      fill_epochs_ = std::make_unique<ChunkedArray<std::atomic<std::uint64_t>>>(max_rows);
    }
  }

  const ColumnSchema& schema() const { return schema_; }

  void reserve(std::size_t rows) {
    validity_.reserve((rows + 63) / 64);
    if (ints_) ints_->reserve(rows);
    if (decimals_) decimals_->reserve(rows);
    if (codes_) codes_->reserve(rows);
    if (fill_epochs_) fill_epochs_->reserve(rows);
  }

  // Writer only, for rows beyond the committed count.
  void write(std::size_t row, const Value& v) {
    if (is_null(v)) return;
    store_value(row, v);
    validity_[row / 64].fetch_or(std::uint64_t{1} << (row % 64), std::memory_order_relaxed);
  }

  // Writer only, under the commit lock. The epoch store publishes the value.
  void fill(std::size_t row, const Value& v, std::uint64_t epoch) {
    store_value(row, v);
    (*fill_epochs_)[row].store(epoch, std::memory_order_release);
  }

  bool valid(std::size_t row, std::uint64_t epoch) const {
    if (validity_[row / 64].load(std::memory_order_relaxed) & (std::uint64_t{1} << (row % 64))) {
      return true;
    }
    if (!fill_epochs_) return false;
    std::uint64_t filled = (*fill_epochs_)[row].load(std::memory_order_acquire);
    return filled != 0 && filled <= epoch;
  }

  std::int64_t int_at(std::size_t row) const { return (*ints_)[row]; }
  double decimal_at(std::size_t row) const { return (*decimals_)[row]; }
  std::string_view text_at(std::size_t row) const { return (*dict_)[(*codes_)[row]]; }

  Value value(std::size_t row, std::uint64_t epoch) const {
    if (!valid(row, epoch)) return {};
    switch (schema_.type) {
      case ColumnType::kInt64:
      case ColumnType::kTimestamp:
        return int_at(row);
      case ColumnType::kDecimal:
        return decimal_at(row);
      case ColumnType::kText:
        return std::string(text_at(row));
    }
    return {};
  }

  std::size_t memory_bytes() const {
    std::size_t bytes = validity_.allocated_bytes();
    if (ints_) bytes += ints_->allocated_bytes();
    if (decimals_) bytes += decimals_->allocated_bytes();
    if (codes_) bytes += codes_->allocated_bytes();
    if (dict_) bytes += dict_->allocated_bytes() + dict_bytes_.load(std::memory_order_relaxed);
    if (fill_epochs_) bytes += fill_epochs_->allocated_bytes();
    return bytes;
  }

 private:
  void store_value(std::size_t row, const Value& v) {
    switch (schema_.type) {
      case ColumnType::kInt64:
      case ColumnType::kTimestamp:
        (*ints_)[row] = std::get<std::int64_t>(v);
        break;
      case ColumnType::kDecimal:
        (*decimals_)[row] = std::holds_alternative<double>(v)
                                ? std::get<double>(v)
                                : static_cast<double>(std::get<std::int64_t>(v));
        break;
      case ColumnType::kText:
        (*codes_)[row] = intern(std::get<std::string>(v));
        break;
    }
  }

  std::uint32_t intern(const std::string& s) {
    auto it = dict_index_.find(s);
    if (it != dict_index_.end()) return it->second;
    auto code = static_cast<std::uint32_t>(dict_index_.size());
    dict_->reserve(code + std::size_t{1});
    (*dict_)[code] = s;
    dict_index_.emplace(s, code);
    if (s.size() >= sizeof(std::string)) {
      dict_bytes_.fetch_add(s.size() + 1, std::memory_order_relaxed);
    }
    return code;
  }

  ColumnSchema schema_;
  ChunkedArray<std::atomic<std::uint64_t>> validity_;
  std::unique_ptr<ChunkedArray<std::int64_t>> ints_;
  std::unique_ptr<ChunkedArray<double>> decimals_;
  std::unique_ptr<ChunkedArray<std::uint32_t>> codes_;
  std::unique_ptr<ChunkedArray<std::string>> dict_;
  std::unordered_map<std::string, std::uint32_t> dict_index_;  // writer only
  std::atomic<std::size_t> dict_bytes_{0};
  std::unique_ptr<ChunkedArray<std::atomic<std::uint64_t>>> fill_epochs_;
};

class Table {
 public:
  Table(TableSchema s, std::size_t max_rows) : schema(std::move(s)) {
    for (const auto& c : schema.columns) columns.push_back(std::make_unique<Column>(c, max_rows));
    dense_ids = !schema.columns.empty() && schema.columns[0].name == "ID" &&
                schema.columns[0].type == ColumnType::kInt64;
  }

  TableSchema schema;
  std::vector<std::unique_ptr<Column>> columns;
  std::vector<int> fk_targets;  // per column: referenced table id or -1
  bool dense_ids = false;
  std::atomic<std::uint64_t> committed{0};
  std::mutex writer_mu;
};

namespace {

// Literal normalized for fast comparison against a column of known type.
struct Literal {
  bool text = false;
  bool integral = false;
  std::int64_t i = 0;
  long double d = 0;
  std::string s;
};

Literal make_literal(const Value& v, const ColumnSchema& col) {
  auto mismatch = [&] {
    return InvalidArgument("type mismatch in predicate on " + col.name + " (" +
                           std::string(to_string(col.type)) + ")");
  };
  Literal lit;
  if (col.type == ColumnType::kText) {
    if (!std::holds_alternative<std::string>(v)) throw mismatch();
    lit.text = true;
    lit.s = std::get<std::string>(v);
    return lit;
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    lit.integral = true;
    lit.i = *i;
    lit.d = static_cast<long double>(*i);
  } else if (const auto* d = std::get_if<double>(&v)) {
    lit.d = *d;
  } else {
    throw mismatch();
  }
  return lit;
}

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

bool apply_op(CompareOp op, int cmp) {
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

struct ResolvedPredicate {
  const Column* column;
  ScanPredicate::Kind kind;
  CompareOp op;
  Literal lo;
  Literal hi;
};

int compare_cell(const Column& c, std::size_t row, const Literal& lit) {
  switch (c.schema().type) {
    case ColumnType::kText:
      return three_way(c.text_at(row), std::string_view(lit.s));
    case ColumnType::kInt64:
    case ColumnType::kTimestamp:
      if (lit.integral) return three_way(c.int_at(row), lit.i);
      return three_way(static_cast<long double>(c.int_at(row)), lit.d);
    case ColumnType::kDecimal:
      return three_way(static_cast<long double>(c.decimal_at(row)), lit.d);
  }
  return 0;
}

bool matches(const ResolvedPredicate& p, std::size_t row, std::uint64_t epoch) {
  bool valid = p.column->valid(row, epoch);
  switch (p.kind) {
    case ScanPredicate::Kind::kIsNull:
      return !valid;
    case ScanPredicate::Kind::kIsNotNull:
      return valid;
    case ScanPredicate::Kind::kCompare:
      return valid && apply_op(p.op, compare_cell(*p.column, row, p.lo));
    case ScanPredicate::Kind::kBetween:
      return valid && compare_cell(*p.column, row, p.lo) >= 0 &&
             compare_cell(*p.column, row, p.hi) <= 0;
  }
  return false;
}

std::string join_messages(const std::vector<std::string>& errors) {
  constexpr std::size_t kShown = 20;
  std::string out;
  for (std::size_t i = 0; i < errors.size() && i < kShown; ++i) {
    if (i) out += "; ";
    out += errors[i];
  }
  if (errors.size() > kShown) out += "; and " + std::to_string(errors.size() - kShown) + " more";
  return out;
}

}  // namespace

Store::Store(StoreOptions options)
    : options_(std::move(options)),
      business_rate_(options_.rate_window_s),
      sensor_rate_(options_.rate_window_s) {
  if (options_.max_total_rows == 0) throw InvalidArgument("max_total_rows must be positive");
}

Store::~Store() = default;

std::unique_ptr<Store> Store::with_catalog(const SchemaCatalog& tables, StoreOptions options) {
  auto store = std::make_unique<Store>(std::move(options));
  for (const auto& t : tables.tables()) store->create_table(t);
  return store;
}

TableId Store::create_table(TableSchema schema) {
  if (schema.columns.empty()) throw InvalidArgument("table " + schema.name + " has no columns");
  for (const auto& t : tables_) {
    if (t->schema.name == schema.name) throw InvalidArgument("table " + schema.name + " exists");
  }
  std::vector<int> fks;
  for (const auto& c : schema.columns) {
    if (c.references.empty()) {
      fks.push_back(-1);
      continue;
    }
    if (c.references == schema.name) {
      fks.push_back(static_cast<int>(tables_.size()));
      continue;
    }
    fks.push_back(static_cast<int>(table_id(c.references)));
  }
  auto table = std::make_unique<Table>(std::move(schema), options_.max_total_rows);
  table->fk_targets = std::move(fks);
  tables_.push_back(std::move(table));
  std::vector<TableSchema> all = catalog_.tables();
  all.push_back(tables_.back()->schema);
  catalog_ = SchemaCatalog(std::move(all));
  return tables_.size() - 1;
}

const SchemaCatalog& Store::catalog() const { return catalog_; }

TableId Store::table_id(std::string_view table) const {
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i]->schema.name == table) return i;
  }
  throw NotFound("unknown table " + std::string(table));
}

const TableSchema& Store::schema(std::string_view table) const {
  return tables_[table_id(table)]->schema;
}

std::int64_t Store::now_second() const {
  if (options_.wall_seconds) return options_.wall_seconds();
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::uint64_t Store::append(std::string_view table, std::span<const Row> rows) {
  AppendRef ref{table_id(table), rows};
  return commit(std::span(&ref, 1), {}).front();
}

void Store::write(const WriteBatch& batch) {
  std::vector<AppendRef> refs;
  refs.reserve(batch.appends.size());
  for (const auto& a : batch.appends) refs.push_back({table_id(a.table), a.rows});
  commit(refs, batch.updates, batch.metered);
}

std::vector<std::uint64_t> Store::commit(std::span<const AppendRef> appends,
                                         std::span<const CellUpdate> updates, bool metered) {
  struct ResolvedUpdate {
    Table* table;
    std::size_t row;
    std::size_t column;
    const Value* value;
  };

  std::vector<TableId> involved;
  for (const auto& a : appends) involved.push_back(a.table);
  std::vector<TableId> update_tables;
  for (const auto& u : updates) update_tables.push_back(table_id(u.table));
  involved.insert(involved.end(), update_tables.begin(), update_tables.end());
  std::sort(involved.begin(), involved.end());
  involved.erase(std::unique(involved.begin(), involved.end()), involved.end());

  std::vector<std::unique_lock<std::mutex>> locks;
  for (TableId t : involved) locks.emplace_back(tables_[t]->writer_mu);

  std::vector<std::uint64_t> projected(tables_.size());
  for (std::size_t t = 0; t < tables_.size(); ++t) {
    projected[t] = tables_[t]->committed.load(std::memory_order_acquire);
  }
  const std::vector<std::uint64_t> before = projected;

  std::vector<std::string> errors;
  std::vector<std::uint64_t> first_ids;
  std::uint64_t added = 0;
  for (const auto& a : appends) {
    Table& t = *tables_[a.table];
    first_ids.push_back(projected[a.table] + 1);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const Row& row = a.rows[r];
      std::string where = t.schema.name + " row " + std::to_string(r);
      for (const auto& v : validate_row(t.schema, row)) {
        errors.push_back(where + ": " + v.code + ": " + v.message);
      }
      if (row.size() != t.schema.columns.size()) continue;
      std::uint64_t expected_id = projected[a.table] + r + 1;
      if (t.dense_ids) {
        const auto* id = std::get_if<std::int64_t>(&row[0]);
        if (id && static_cast<std::uint64_t>(*id) != expected_id) {
          errors.push_back(where + ": id-sequence: expected ID " + std::to_string(expected_id) +
                           ", got " + std::to_string(*id));
        }
      }
      for (std::size_t c = 0; c < row.size(); ++c) {
        int target = t.fk_targets[c];
        const auto* key = std::get_if<std::int64_t>(&row[c]);
        if (target < 0 || !key) continue;
        std::uint64_t limit = projected[static_cast<std::size_t>(target)];
        if (static_cast<std::size_t>(target) == a.table) limit = expected_id;
        if (*key < 1 || static_cast<std::uint64_t>(*key) > limit) {
          errors.push_back(where + ": referential: " + t.schema.columns[c].name + " " +
                           std::to_string(*key) + " not found in " + t.schema.columns[c].references);
        }
      }
    }
    projected[a.table] += a.rows.size();
    added += a.rows.size();
  }

  std::vector<ResolvedUpdate> resolved;
  std::set<std::tuple<TableId, std::uint64_t, std::size_t>> seen;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    const CellUpdate& u = updates[i];
    TableId tid = update_tables[i];
    Table& t = *tables_[tid];
    std::string where = t.schema.name + " update ID " + std::to_string(u.id);
    int col = t.schema.column_index(u.column);
    if (col < 0) {
      errors.push_back(where + ": unknown column " + u.column);
      continue;
    }
    auto c = static_cast<std::size_t>(col);
    if (!t.schema.columns[c].fillable) {
      errors.push_back(where + ": column " + u.column + " is not fillable");
      continue;
    }
    if (u.id < 1 || u.id > before[tid]) {
      errors.push_back(where + ": row not committed");
      continue;
    }
    std::size_t row = u.id - 1;
    if (!seen.emplace(tid, row, c).second) {
      errors.push_back(where + ": duplicate fill of " + u.column);
      continue;
    }
    if (is_null(u.value)) {
      errors.push_back(where + ": fill value for " + u.column + " is null");
      continue;
    }
    if (t.columns[c]->valid(row, kLatestEpoch)) {
      errors.push_back(where + ": " + u.column + " already set");
      continue;
    }
    Row current;
    for (const auto& column : t.columns) current.push_back(column->value(row, kLatestEpoch));
    current[c] = u.value;
    for (const auto& v : validate_row(t.schema, current)) {
      errors.push_back(where + ": " + v.code + ": " + v.message);
    }
    int target = t.fk_targets[c];
    if (const auto* key = std::get_if<std::int64_t>(&u.value); key && target >= 0) {
      if (*key < 1 || static_cast<std::uint64_t>(*key) > projected[static_cast<std::size_t>(target)]) {
        errors.push_back(where + ": referential: " + u.column + " " + std::to_string(*key) +
                         " not found in " + t.schema.columns[c].references);
      }
    }
    resolved.push_back({&t, row, c, &u.value});
  }

  if (!errors.empty()) throw Rejected(join_messages(errors));
  if (total_rows_.load(std::memory_order_acquire) + added > options_.max_total_rows) {
    throw CapacityExceeded("row cap of " + std::to_string(options_.max_total_rows) + " reached");
  }

  // Cells of new rows are written outside the commit lock: readers cannot see
  // them until the counts below are published.
  std::vector<std::uint64_t> cursor = before;
  for (const auto& a : appends) {
    Table& t = *tables_[a.table];
    std::uint64_t base = cursor[a.table];
    for (auto& column : t.columns) column->reserve(base + a.rows.size());
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const Row& row = a.rows[r];
      for (std::size_t c = 0; c < row.size(); ++c) t.columns[c]->write(base + r, row[c]);
    }
    cursor[a.table] += a.rows.size();
  }

  std::uint64_t business = 0;
  std::uint64_t sensor = 0;
  {
    std::lock_guard lock(commit_mu_);
    std::uint64_t epoch = epoch_ + 1;
    for (const auto& u : resolved) u.table->columns[u.column]->fill(u.row, *u.value, epoch);
    for (TableId t : involved) {
      std::uint64_t delta = cursor[t] - before[t];
      if (delta == 0) continue;
      tables_[t]->committed.store(cursor[t], std::memory_order_release);
      (tables_[t]->schema.stream == StreamClass::kSensor ? sensor : business) += delta;
    }
    total_rows_.fetch_add(added, std::memory_order_acq_rel);
    epoch_ = epoch;
  }
  if (!metered) return first_ids;
  std::int64_t now = now_second();
  if (business) business_rate_.credit(business, now);
  if (sensor) sensor_rate_.credit(sensor, now);
  return first_ids;
}

Snapshot Store::snapshot() const {
  Snapshot snap;
  snap.visible.resize(tables_.size());
  std::lock_guard lock(commit_mu_);
  for (std::size_t t = 0; t < tables_.size(); ++t) {
    snap.visible[t] = tables_[t]->committed.load(std::memory_order_acquire);
  }
  snap.epoch = epoch_;
  snap.acquired_at = std::chrono::system_clock::now();
  return snap;
}

ColumnBatch Store::scan(const Snapshot& snap, std::string_view table,
                        std::span<const std::string> columns,
                        std::span<const ScanPredicate> predicates) const {
  TableId id = table_id(table);
  const Table& t = *tables_[id];
  auto column_of = [&](const std::string& name) -> const Column& {
    int idx = t.schema.column_index(name);
    if (idx < 0) throw NotFound("unknown column " + name + " in " + t.schema.name);
    return *t.columns[static_cast<std::size_t>(idx)];
  };

  std::vector<ResolvedPredicate> preds;
  for (const auto& p : predicates) {
    const Column& c = column_of(p.column);
    ResolvedPredicate r{&c, p.kind, p.op, {}, {}};
    if (p.kind == ScanPredicate::Kind::kCompare || p.kind == ScanPredicate::Kind::kBetween) {
      r.lo = make_literal(p.operand, c.schema());
    }
    if (p.kind == ScanPredicate::Kind::kBetween) r.hi = make_literal(p.upper, c.schema());
    preds.push_back(std::move(r));
  }

  std::vector<const Column*> out_cols;
  ColumnBatch batch;
  for (const auto& name : columns) {
    const Column& c = column_of(name);
    out_cols.push_back(&c);
    ColumnVector v;
    v.name = name;
    v.type = c.schema().type;
    batch.columns.push_back(std::move(v));
  }

  const std::uint64_t n = snap.rows(id);
  if (preds.empty()) {
    batch.row_indices.resize(n);
    for (std::uint64_t r = 0; r < n; ++r) batch.row_indices[r] = r;
  } else {
    for (std::uint64_t r = 0; r < n; ++r) {
      bool keep = true;
      for (const auto& p : preds) {
        if (!matches(p, r, snap.epoch)) {
          keep = false;
          break;
        }
      }
      if (keep) batch.row_indices.push_back(r);
    }
  }

  const std::size_t rows = batch.row_indices.size();
  for (std::size_t k = 0; k < out_cols.size(); ++k) {
    const Column& c = *out_cols[k];
    ColumnVector& v = batch.columns[k];
    v.valid.resize(rows);
    if (is_integral(v.type)) v.ints.resize(rows);
    if (v.type == ColumnType::kDecimal) v.decimals.resize(rows);
    if (v.type == ColumnType::kText) v.texts.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      std::size_t r = batch.row_indices[i];
      bool ok = c.valid(r, snap.epoch);
      v.valid[i] = ok ? 1 : 0;
      if (!ok) continue;
      switch (v.type) {
        case ColumnType::kInt64:
        case ColumnType::kTimestamp:
          v.ints[i] = c.int_at(r);
          break;
        case ColumnType::kDecimal:
          v.decimals[i] = c.decimal_at(r);
          break;
        case ColumnType::kText:
          v.texts[i] = c.text_at(r);
          break;
      }
    }
  }
  return batch;
}

Row Store::read_row(const Snapshot& snap, std::string_view table, std::uint64_t index) const {
  TableId id = table_id(table);
  if (index >= snap.rows(id)) throw NotFound("row " + std::to_string(index) + " not visible");
  Row row;
  for (const auto& c : tables_[id]->columns) row.push_back(c->value(index, snap.epoch));
  return row;
}

double Store::ingest_rate(StreamClass stream) const {
  const RateMeter& m = stream == StreamClass::kSensor ? sensor_rate_ : business_rate_;
  return m.rate(now_second());
}

std::uint64_t Store::rows_credited(StreamClass stream) const {
  return (stream == StreamClass::kSensor ? sensor_rate_ : business_rate_).total();
}

std::size_t Store::memory_bytes(std::string_view table) const {
  std::size_t bytes = 0;
  for (const auto& c : tables_[table_id(table)]->columns) bytes += c->memory_bytes();
  return bytes;
}

}  // namespace plantpulse::store
