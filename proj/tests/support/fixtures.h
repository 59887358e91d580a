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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oracles.h"
#include "plantpulse/domain/rows.h"
#include "plantpulse/query/executor.h"
#include "plantpulse/sim/master_data.h"
#include "plantpulse/store/store.h"

namespace plantpulse::testing {

/// Builds small hand-made datasets in a store. Rows are buffered per table
/// and appended in dependency order on flush().
class FixtureBuilder {
 public:
  explicit FixtureBuilder(sim::MasterData master = sim::MasterData::defaults(),
                          store::StoreOptions options = {});

  /// New production order (with its own purchase order head + item) whose
  /// material lot comes from the given supplier. Returns the order id.
  std::uint64_t add_order(std::uint64_t product, std::uint64_t supplier);
  std::uint64_t add_position(std::uint64_t order, std::uint64_t workplace, std::int64_t seq,
                             std::int64_t entered, std::optional<std::int64_t> left);
  std::uint64_t add_reading(std::uint64_t workplace, std::int64_t date, SensorKind kind, double value,
                            std::uint64_t sensor = 1);

  store::Store& flush();
  store::Store& store() { return *store_; }

 private:
  std::unique_ptr<store::Store> store_;
  std::vector<PurchaseOrderHead> po_heads_;
  std::vector<PurchaseOrderItem> po_items_;
  std::vector<ProductionOrderHead> heads_;
  std::vector<ProductionOrderPosition> positions_;
  std::vector<SensorReading> readings_;
  std::uint64_t next_po_ = 1;
  std::uint64_t next_head_ = 1;
  std::uint64_t next_position_ = 1;
  std::uint64_t next_reading_ = 1;
};

/// Loads a plain dataset: one production order per position, readings with
/// their ids preserved.
void load_dataset(FixtureBuilder& builder, const PlainDataset& d);

/// Empty when the engine result equals the oracle rows; otherwise a
/// description of the first difference.
std::string compare_family(const query::ResultTable& result, const std::vector<OracleRow>& expected,
                           const FamilyQuery& q);

/// One finished position at the Cutting Machine (entered 100, left 200) with
/// temperatures 10, 20, 30 at 100, 150, 200 and 99 at 201.
store::Store& query1_fixture(FixtureBuilder& b);

/// Expects master data with suppliers A and B. A's order sees vibrations 2
/// and 4 at Assembly, B's order sees 6; other readings fall outside.
store::Store& query2_fixture(FixtureBuilder& b);

/// Master data with the given supplier names and the default everything else.
sim::MasterData master_with_suppliers(const std::vector<std::string>& names);

}  // namespace plantpulse::testing
