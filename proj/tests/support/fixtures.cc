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

#include "fixtures.h"

namespace plantpulse::testing {

namespace {

template <typename Rows>
void append_all(store::Store& s, Rows& rows) {
  if (rows.empty()) return;
  std::vector<Row> out;
  for (const auto& r : rows) out.push_back(r.to_row());
  s.append(Rows::value_type::kTable, out);
  rows.clear();
}

}  // namespace

FixtureBuilder::FixtureBuilder(sim::MasterData master, store::StoreOptions options)
    : store_(store::Store::with_catalog(catalog(), std::move(options))) {
  store::WriteBatch batch;
  batch.metered = false;
  auto add = [&](const auto& rows) {
    if (rows.empty()) return;
    store::TableAppend a;
    a.table = std::string(std::decay_t<decltype(rows)>::value_type::kTable);
    for (const auto& r : rows) a.rows.push_back(r.to_row());
    batch.appends.push_back(std::move(a));
  };
  add(master.suppliers);
  add(master.customers);
  add(master.products);
  add(master.materials);
  add(master.workplaces);
  store_->write(batch);
}

std::uint64_t FixtureBuilder::add_order(std::uint64_t product, std::uint64_t supplier) {
  EntityId po{next_po_++};
  po_heads_.push_back({po, EntityId{supplier}, Timestamp{0}});
  po_items_.push_back({po, po, EntityId{1}, 1});
  EntityId head{next_head_++};
  heads_.push_back({head, EntityId{product}, po, std::nullopt, Timestamp{0}, std::nullopt});
  return head.value;
}

std::uint64_t FixtureBuilder::add_position(std::uint64_t order, std::uint64_t workplace, std::int64_t seq,
                                           std::int64_t entered, std::optional<std::int64_t> left) {
  EntityId id{next_position_++};
  std::optional<Timestamp> l;
  if (left) l = Timestamp{*left};
  positions_.push_back({id, EntityId{order}, EntityId{workplace}, seq, Timestamp{entered}, l});
  return id.value;
}

std::uint64_t FixtureBuilder::add_reading(std::uint64_t workplace, std::int64_t date, SensorKind kind,
                                          double value, std::uint64_t sensor) {
  EntityId id{next_reading_++};
  readings_.push_back({id, EntityId{workplace}, EntityId{sensor}, Timestamp{date}, kind, value});
  return id.value;
}

store::Store& FixtureBuilder::flush() {
  append_all(*store_, po_heads_);
  append_all(*store_, po_items_);
  append_all(*store_, heads_);
  append_all(*store_, positions_);
  append_all(*store_, readings_);
  return *store_;
}

void load_dataset(FixtureBuilder& builder, const PlainDataset& d) {
  for (const auto& p : d.positions) {
    auto order = builder.add_order(1, 1);
    builder.add_position(order, p.workplace, 1, p.entered, p.left);
  }
  static constexpr SensorKind kKinds[] = {SensorKind::kTemperature, SensorKind::kNoise,
                                          SensorKind::kVibration};
  for (const auto& r : d.readings) builder.add_reading(r.workplace, r.date, kKinds[r.kind], r.value);
  builder.flush();
}

namespace {

std::optional<double> numeric(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

}  // namespace

std::string compare_family(const query::ResultTable& result, const std::vector<OracleRow>& expected,
                           const FamilyQuery& q) {
  std::string where = " for " + q.sql();
  if (result.rows.size() != expected.size()) {
    return "row count " + std::to_string(result.rows.size()) + " != " +
           std::to_string(expected.size()) + where;
  }
  bool exact = q.agg == FamilyAgg::kCountStar || q.agg == FamilyAgg::kCount ||
               q.agg == FamilyAgg::kMin || q.agg == FamilyAgg::kMax;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const Row& row = result.rows[i];
    std::size_t vcol = 0;
    if (expected[i].key) {
      auto key = numeric(row[0]);
      if (!key || *key != static_cast<double>(*expected[i].key)) {
        return "key mismatch at row " + std::to_string(i) + where;
      }
      vcol = 1;
    }
    auto got = numeric(row[vcol]);
    const auto& want = expected[i].value;
    if (got.has_value() != want.has_value()) return "null mismatch at row " + std::to_string(i) + where;
    if (!got) continue;
    bool ok = exact ? *got == *want : close_relative(*got, *want, 1e-9);
    if (!ok) {
      return "value " + to_display(row[vcol]) + " != " + std::to_string(*want) + " at row " +
             std::to_string(i) + where;
    }
  }
  return {};
}

store::Store& query1_fixture(FixtureBuilder& b) {
  auto order = b.add_order(1, 1);
  b.add_position(order, 1, 1, 100, 200);
  b.add_reading(1, 100, SensorKind::kTemperature, 10.0);
  b.add_reading(1, 150, SensorKind::kTemperature, 20.0);
  b.add_reading(1, 200, SensorKind::kTemperature, 30.0);
  b.add_reading(1, 201, SensorKind::kTemperature, 99.0);
  return b.flush();
}

store::Store& query2_fixture(FixtureBuilder& b) {
  auto a = b.add_order(1, 1);
  auto bb = b.add_order(2, 2);
  b.add_position(a, 1, 1, 0, 90);
  b.add_position(a, 2, 2, 100, 200);
  b.add_position(bb, 1, 1, 200, 290);
  b.add_position(bb, 2, 2, 300, 400);
  b.add_reading(2, 120, SensorKind::kVibration, 2.0);
  b.add_reading(2, 180, SensorKind::kVibration, 4.0);
  b.add_reading(2, 350, SensorKind::kVibration, 6.0);
  b.add_reading(2, 250, SensorKind::kVibration, 100.0);  // between the two windows
  b.add_reading(1, 150, SensorKind::kVibration, 100.0);  // other workplace
  b.add_reading(2, 150, SensorKind::kTemperature, 50.0);
  return b.flush();
}

sim::MasterData master_with_suppliers(const std::vector<std::string>& names) {
  sim::MasterData m = sim::MasterData::defaults();
  m.suppliers.clear();
  std::uint64_t id = 1;
  for (const auto& n : names) m.suppliers.push_back({EntityId{id++}, n});
  return m;
}

}  // namespace plantpulse::testing
