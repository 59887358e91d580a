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

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "plantpulse/domain/error.h"
#include "plantpulse/domain/validate.h"
#include "plantpulse/sim/clock.h"
#include "plantpulse/sim/engine.h"
#include "plantpulse/store/integrity.h"
#include "plantpulse/store/store.h"

using namespace plantpulse;
using namespace plantpulse::sim;

namespace {

// Everything emitted so far with fill-ins applied, keyed by id.
struct World {
  std::map<std::uint64_t, ProductionOrderHead> heads;
  std::map<std::uint64_t, ProductionOrderPosition> positions;
  std::map<std::uint64_t, SalesOrderItem> sales_items;
  std::ostringstream log;

  template <typename Rows>
  void dump(const Rows& rows) {
    for (const auto& r : rows) {
      log << Rows::value_type::kTable;
      for (const auto& v : r.to_row()) log << '|' << to_display(v);
      log << '\n';
    }
  }

  void apply(const EmittedBatch& b) {
    dump(b.purchase_order_heads);
    dump(b.purchase_order_items);
    dump(b.sales_order_heads);
    dump(b.sales_order_items);
    dump(b.production_order_heads);
    dump(b.production_order_positions);
    for (const auto& h : b.production_order_heads) CHECK(heads.emplace(h.id.value, h).second);
    for (const auto& p : b.production_order_positions) CHECK(positions.emplace(p.id.value, p).second);
    for (const auto& s : b.sales_order_items) CHECK(sales_items.emplace(s.id.value, s).second);
    for (const auto& l : b.positions_left) {
      log << "left|" << l.position_id.value << '|' << l.left_at.millis << '\n';
      auto& p = positions.at(l.position_id.value);
      CHECK_FALSE(p.left_at.has_value());
      p.left_at = l.left_at;
    }
    for (const auto& f : b.orders_finished) {
      log << "finished|" << f.order_id.value << '|' << f.finished_at.millis << '\n';
      auto& h = heads.at(f.order_id.value);
      CHECK_FALSE(h.finished_at.has_value());
      h.finished_at = f.finished_at;
    }
    for (const auto& s : b.sales_links) {
      log << "sold|" << s.order_id.value << '|' << s.sales_order_item_id.value << '\n';
      heads.at(s.order_id.value).sales_order_item_id = s.sales_order_item_id;
    }
  }
};

World run(std::uint64_t seed, std::int64_t until_ms, std::int64_t step_ms = 100,
          MasterData master = MasterData::defaults()) {
  SimEngine engine(std::move(master), SimOptions{seed, 1000, 10});
  World w;
  for (std::int64_t t = step_ms; t <= until_ms; t += step_ms) w.apply(engine.advance_to(Timestamp{t}));
  return w;
}

void write_batch(store::Store& s, const EmittedBatch& b) {
  store::WriteBatch batch;
  auto add = [&](const auto& rows) {
    if (rows.empty()) return;
    store::TableAppend a;
    a.table = std::string(std::decay_t<decltype(rows)>::value_type::kTable);
    for (const auto& r : rows) a.rows.push_back(r.to_row());
    batch.appends.push_back(std::move(a));
  };
  add(b.purchase_order_heads);
  add(b.purchase_order_items);
  add(b.sales_order_heads);
  add(b.sales_order_items);
  add(b.production_order_heads);
  add(b.production_order_positions);
  for (const auto& l : b.positions_left) {
    batch.updates.push_back({"PRODUCTION_ORDER_POSITION", l.position_id.value, "LEFT_AT", l.left_at.millis});
  }
  for (const auto& f : b.orders_finished) {
    batch.updates.push_back({"PRODUCTION_ORDER_HEAD", f.order_id.value, "FINISHED_AT", f.finished_at.millis});
  }
  for (const auto& l : b.sales_links) {
    batch.updates.push_back({"PRODUCTION_ORDER_HEAD", l.order_id.value, "SALES_ORDER_ITEM_ID",
                             static_cast<std::int64_t>(l.sales_order_item_id.value)});
  }
  s.write(batch);
}

}  // namespace

TEST_CASE("default master data") {
  auto m = MasterData::defaults();
  CHECK(m.validate().empty());
  CHECK(m.suppliers.size() == 3);
  CHECK(m.customers.size() == 2);
  CHECK(m.products.size() == 2);
  CHECK(m.materials.size() == 2);
  CHECK(m.workplaces.size() == 4);
  CHECK(m.workplace_named("Cutting Machine").value == 1);
  CHECK(m.workplace_named("Assembly").value == 2);
  for (const auto& p : m.products) {
    const auto& route = m.routings.at(p.id.value);
    REQUIRE(route.size() == 2);
    CHECK(route[0].workplace_id == m.workplace_named("Cutting Machine"));
    CHECK(route[1].workplace_id == m.workplace_named("Assembly"));
  }
}

TEST_CASE("master data overrides") {
  std::int64_t arrival = 0;
  auto m = parse_master_data(R"({"suppliers":["A","B"],"arrival_mean_ms":250,
    "routings":{"Engine A":[{"workplace":"Paint Shop","mean_duration_ms":100,"duration_jitter":0}]}})",
                             &arrival);
  CHECK(m.suppliers.size() == 2);
  CHECK(arrival == 250);
  CHECK(m.routings.at(1).size() == 1);
  CHECK(m.routings.at(2).size() == 2);
  CHECK_THROWS_AS(parse_master_data(R"({"products":[]})"), InvalidArgument);
  CHECK_THROWS_AS(parse_master_data(R"({"colour":"red"})"), InvalidArgument);
  CHECK_THROWS_AS(parse_master_data("{"), InvalidArgument);
}

TEST_CASE("same seed gives identical output") {
  auto a = run(42, 60'000);
  auto b = run(42, 60'000);
  CHECK(a.log.str() == b.log.str());
  CHECK_FALSE(a.log.str().empty());
}

TEST_CASE("different seeds diverge") { CHECK(run(7, 60'000).log.str() != run(8, 60'000).log.str()); }

TEST_CASE("invalid master data is refused") {
  auto m = MasterData::defaults();
  m.products.clear();
  m.routings.clear();
  CHECK_THROWS_AS(SimEngine(m, SimOptions{}), InvalidArgument);
  CHECK_THROWS_AS(SimEngine(MasterData::defaults(), SimOptions{42, 0, 10}), InvalidArgument);
}

TEST_CASE("advance_to") {
  SimEngine e(MasterData::defaults(), SimOptions{});
  CHECK(e.pending_events() == 1);
  CHECK(e.advance_to(e.now()).empty());
  e.advance_to(Timestamp{5000});
  CHECK_THROWS_AS(e.advance_to(Timestamp{4999}), InvalidArgument);
}

TEST_CASE("zero jitter forces the mean duration") {
  auto m = MasterData::defaults();
  for (auto& [product, steps] : m.routings) {
    for (auto& s : steps) s.duration_jitter = 0.0;
  }
  SimEngine probe(m, SimOptions{});
  CHECK(probe.draw_duration(RoutingStep{EntityId{1}, 5000, 0.0}) == 5000);
  auto w = run(42, 120'000, 100, m);
  std::size_t closed = 0;
  for (const auto& [id, p] : w.positions) {
    if (!p.left_at) continue;
    CHECK(p.left_at->millis - p.entered_at.millis == 5000);
    ++closed;
  }
  CHECK(closed > 0);
}

TEST_CASE("durations stay within the jitter band") {
  SimEngine e(MasterData::defaults(), SimOptions{});
  RoutingStep step{EntityId{1}, 5000, 0.2};
  for (int i = 0; i < 10'000; ++i) {
    auto d = e.draw_duration(step);
    REQUIRE(d >= 4000);
    REQUIRE(d <= 6000);
  }
}

TEST_CASE("steps of an order follow each other over one hour") {
  auto w = run(42, 3'600'000, 1000);
  std::map<std::uint64_t, std::map<std::int64_t, const ProductionOrderPosition*>> by_head;
  for (const auto& [id, p] : w.positions) by_head[p.head_id.value][p.seq_no] = &p;
  std::size_t pairs = 0;
  for (const auto& [head, steps] : by_head) {
    auto first = steps.find(1);
    auto second = steps.find(2);
    if (first == steps.end() || second == steps.end()) continue;
    REQUIRE(first->second->left_at.has_value());
    CHECK(second->second->entered_at >= *first->second->left_at);
    ++pairs;
  }
  CHECK(pairs > 1000);
}

TEST_CASE("stopped engine emits nothing and restarts without duplicate ids") {
  SimEngine e(MasterData::defaults(), SimOptions{});
  World w;
  w.apply(e.advance_to(Timestamp{30'000}));
  CHECK_FALSE(e.stop());
  CHECK_FALSE(e.stop());
  auto frozen = e.now();
  CHECK(e.advance_to(Timestamp{40'000}).empty());
  CHECK(e.now() == frozen);
  CHECK(e.start());
  CHECK(e.start());
  CHECK(e.running());
  w.apply(e.advance_to(Timestamp{80'000}));
  CHECK(w.heads.size() > 30);
}

TEST_CASE("liveness, conservation and product matching") {
  SimEngine e(MasterData::defaults(), SimOptions{});
  auto store = store::Store::with_catalog(catalog());
  {
    store::WriteBatch master;
    const auto& m = e.master();
    auto add = [&](const auto& rows) {
      store::TableAppend a;
      a.table = std::string(std::decay_t<decltype(rows)>::value_type::kTable);
      for (const auto& r : rows) a.rows.push_back(r.to_row());
      master.appends.push_back(std::move(a));
    };
    add(m.suppliers);
    add(m.customers);
    add(m.products);
    add(m.materials);
    add(m.workplaces);
    store->write(master);
  }
  World w;
  std::size_t business_rows = 0;
  for (std::int64_t t = 250; t <= 600'000; t += 250) {
    auto b = e.advance_to(Timestamp{t});
    business_rows += b.row_count();
    w.apply(b);
    write_batch(*store, b);
  }
  CHECK(business_rows >= 500);

  std::map<std::uint64_t, std::vector<const ProductionOrderPosition*>> by_head;
  for (const auto& [id, p] : w.positions) by_head[p.head_id.value].push_back(&p);
  std::size_t finished = 0;
  std::size_t all_left = 0;
  for (const auto& [id, h] : w.heads) {
    const auto& ps = by_head[id];
    bool every = ps.size() == 2;
    for (const auto* p : ps) every = every && p->left_at.has_value();
    finished += h.finished_at ? 1 : 0;
    all_left += every ? 1 : 0;
    CHECK(h.finished_at.has_value() == every);
    REQUIRE(h.sales_order_item_id.has_value());
    CHECK(w.sales_items.at(h.sales_order_item_id->value).product_id == h.product_id);
  }
  CHECK(finished == all_left);
  CHECK(finished > 0);
  CHECK(check_integrity(*store, store->snapshot()).empty());
}

TEST_CASE("emitted rows pass row validation") {
  SimEngine e(MasterData::defaults(), SimOptions{});
  auto b = e.advance_to(Timestamp{60'000});
  for (const auto& r : b.production_order_positions) CHECK(validate_row(r.kTable, r.to_row()).empty());
  for (const auto& r : b.production_order_heads) CHECK(validate_row(r.kTable, r.to_row()).empty());
  for (const auto& r : b.purchase_order_items) CHECK(validate_row(r.kTable, r.to_row()).empty());
}

TEST_CASE("sim clock") {
  SimClock stepped(ClockMode::kStepped, 1.0);
  CHECK(stepped.step(250).millis == 250);
  SimClock rt(ClockMode::kRealTime, 2.0);
  for (int i = 0; i < 4; ++i) rt.elapse(std::chrono::microseconds(250));
  CHECK(rt.now().millis == 2);
  CHECK(parse_clock_mode("realtime") == ClockMode::kRealTime);
  CHECK(parse_clock_mode("stepped") == ClockMode::kStepped);
  CHECK_FALSE(parse_clock_mode("fast").has_value());
}
