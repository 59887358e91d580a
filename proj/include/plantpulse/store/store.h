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

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plantpulse/domain/schema.h"
#include "plantpulse/domain/types.h"
#include "plantpulse/store/rate_meter.h"

namespace plantpulse::store {

class Table;
using TableId = std::size_t;

struct StoreOptions {
  // Ingestion stops (appends throw CapacityExceeded) beyond this many rows.
  std::uint64_t max_total_rows = 50'000'000;
  int rate_window_s = 10;
  // Wall-clock seconds for rate metering; defaults to steady_clock.
  std::function<std::int64_t()> wall_seconds;
};

/// Consistent cut of the store: per-table visible row counts taken at one
/// instant, plus the commit epoch that gates filled-in cells.
struct Snapshot {
  std::vector<std::uint64_t> visible;
  std::uint64_t epoch = 0;
  std::chrono::system_clock::time_point acquired_at;

  std::uint64_t rows(TableId table) const { return table < visible.size() ? visible[table] : 0; }
};

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

std::string_view to_string(CompareOp op);

/// Column-vs-literal filter evaluated inside scan().
struct ScanPredicate {
  enum class Kind { kCompare, kBetween, kIsNull, kIsNotNull };

  std::string column;
  Kind kind = Kind::kCompare;
  CompareOp op = CompareOp::kEq;
  Value operand;  // comparison literal, or BETWEEN lower bound
  Value upper;    // BETWEEN upper bound (inclusive)
};

/// One materialized column. Which vector is populated follows the type:
/// ints for int64/timestamp, decimals for decimal, texts for text. Text views
/// point into the store and stay valid for the store's lifetime.
struct ColumnVector {
  std::string name;
  ColumnType type = ColumnType::kInt64;
  std::vector<std::int64_t> ints;
  std::vector<double> decimals;
  std::vector<std::string_view> texts;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return valid.size(); }
  bool null_at(std::size_t i) const { return valid[i] == 0; }
  Value value(std::size_t i) const;
};

struct ColumnBatch {
  // Zero-based table positions of the returned rows, ascending.
  std::vector<std::uint64_t> row_indices;
  std::vector<ColumnVector> columns;

  std::size_t rows() const { return row_indices.size(); }
  // Throws NotFound.
  const ColumnVector& column(std::string_view name) const;
};

struct TableAppend {
  std::string table;
  std::vector<Row> rows;
};

/// Fill-in of a null cell in a fillable column. The target row must have been
/// committed before the batch carrying the update.
struct CellUpdate {
  std::string table;
  std::uint64_t id = 0;
  std::string column;
  Value value;
};

/// Appends and fill-ins that become visible to readers together.
struct WriteBatch {
  std::vector<TableAppend> appends;
  std::vector<CellUpdate> updates;
  // Unmetered batches (reference data loads) are not credited to the rate
  // meters.
  bool metered = true;

  bool empty() const { return appends.empty() && updates.empty(); }
};

/// Append-only in-memory column store.
///
/// Concurrency: at most one writer per table at a time (enforced with a
/// per-table lock), any number of concurrent readers. Readers never take the
/// writer locks; snapshot() briefly shares a small commit lock with writers,
/// held only while row counts are published.
///
/// Rows carry a dense ID column: the n-th row of a table has ID n. Foreign
/// keys are checked against committed counts of the referenced table.
class Store {
 public:
  explicit Store(StoreOptions options = {});
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  /// Not safe to call concurrently with readers or writers.
  TableId create_table(TableSchema schema);

  /// Store with every table of the given catalog created.
  static std::unique_ptr<Store> with_catalog(const SchemaCatalog& tables, StoreOptions options = {});

  const SchemaCatalog& catalog() const;
  const TableSchema& schema(std::string_view table) const;
  TableId table_id(std::string_view table) const;

  /// Atomic batch append. Returns the ID assigned to the first row.
  /// Throws Rejected listing every violation, CapacityExceeded at the cap.
  std::uint64_t append(std::string_view table, std::span<const Row> rows);

  /// Applies appends (in order) then fill-ins as one commit.
  void write(const WriteBatch& batch);

  Snapshot snapshot() const;

  ColumnBatch scan(const Snapshot& snap, std::string_view table,
                   std::span<const std::string> columns,
                   std::span<const ScanPredicate> predicates = {}) const;

  /// Full row at a zero-based position as seen by the snapshot.
  Row read_row(const Snapshot& snap, std::string_view table, std::uint64_t index) const;

  double ingest_rate(StreamClass stream) const;
  std::uint64_t rows_credited(StreamClass stream) const;
  std::uint64_t total_rows() const { return total_rows_.load(std::memory_order_acquire); }
  std::uint64_t max_total_rows() const { return options_.max_total_rows; }

  /// Bytes held by the table's columns and dictionaries.
  std::size_t memory_bytes(std::string_view table) const;

 private:
  struct AppendRef {
    TableId table;
    std::span<const Row> rows;
  };

  // Returns the first ID assigned to each append.
  std::vector<std::uint64_t> commit(std::span<const AppendRef> appends,
                                    std::span<const CellUpdate> updates, bool metered = true);
  std::int64_t now_second() const;

  StoreOptions options_;
  std::vector<std::unique_ptr<Table>> tables_;
  SchemaCatalog catalog_;
  mutable std::mutex commit_mu_;
  std::uint64_t epoch_ = 0;  // guarded by commit_mu_
  std::atomic<std::uint64_t> total_rows_{0};
  RateMeter business_rate_;
  RateMeter sensor_rate_;
};

}  // namespace plantpulse::store
