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
#include <queue>
#include <random>
#include <vector>

#include "plantpulse/domain/rows.h"
#include "plantpulse/sim/master_data.h"

namespace plantpulse::sim {

enum class EventKind { kOrderArrival, kPositionEnter, kPositionLeave, kSalesBooking };

struct SimEvent {
  Timestamp due;
  std::uint64_t seq = 0;  // event id; breaks ties between equal due times
  EventKind kind = EventKind::kOrderArrival;
  EntityId order;         // production order head
  std::size_t step = 0;   // routing step index
  EntityId position;      // for kPositionLeave
};

// Fill-ins for rows emitted by an earlier batch.
struct PositionLeft {
  EntityId position_id;
  Timestamp left_at;
};

struct OrderFinished {
  EntityId order_id;
  Timestamp finished_at;
};

struct SalesLink {
  EntityId order_id;
  EntityId sales_order_item_id;
};

/// Rows created by one advance_to() call, grouped by table. Rows created and
/// completed in the same call already carry their final values.
struct EmittedBatch {
  std::vector<PurchaseOrderHead> purchase_order_heads;
  std::vector<PurchaseOrderItem> purchase_order_items;
  std::vector<SalesOrderHead> sales_order_heads;
  std::vector<SalesOrderItem> sales_order_items;
  std::vector<ProductionOrderHead> production_order_heads;
  std::vector<ProductionOrderPosition> production_order_positions;
  std::vector<PositionLeft> positions_left;
  std::vector<OrderFinished> orders_finished;
  std::vector<SalesLink> sales_links;

  std::size_t row_count() const;
  bool empty() const;
};

struct SimOptions {
  std::uint64_t seed = 42;
  std::int64_t arrival_mean_ms = 1000;
  // Production orders served by one purchase order item.
  std::int64_t lot_size = 10;
};

/// Seeded discrete-event simulation of the factory's order flow. Single
/// driver: one thread calls advance_to/start/stop.
class SimEngine {
 public:
  /// Throws InvalidArgument for invalid master data or options.
  SimEngine(MasterData master, SimOptions options);

  const MasterData& master() const { return master_; }
  const SimOptions& options() const { return options_; }
  Timestamp now() const { return now_; }
  bool running() const { return running_; }
  std::size_t pending_events() const { return queue_.size(); }

  /// Idempotent; return the running flag.
  bool start();
  bool stop();

  /// Processes every event due at or before t, in (due, seq) order. While
  /// stopped nothing is emitted and the clock stays put.
  /// Throws InvalidArgument when t is before now().
  EmittedBatch advance_to(Timestamp t);

  /// Draw for one routing step; exposed for tests.
  std::int64_t draw_duration(const RoutingStep& step);

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return a.due != b.due ? a.due > b.due : a.seq > b.seq;
    }
  };

  struct OrderState {
    EntityId product_id;
    std::size_t routing_steps = 0;
  };

  void schedule(SimEvent e);
  void on_arrival(const SimEvent& e, EmittedBatch& out);
  void on_sales_booking(const SimEvent& e, EmittedBatch& out);
  void on_enter(const SimEvent& e, EmittedBatch& out);
  void on_leave(const SimEvent& e, EmittedBatch& out);
  std::int64_t draw_interarrival();

  MasterData master_;
  SimOptions options_;
  std::mt19937_64 rng_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  Timestamp now_;
  bool running_ = true;
  std::uint64_t next_seq_ = 1;

  // Per-table id counters: next id to allocate.
  std::uint64_t next_po_head_ = 1;
  std::uint64_t next_po_item_ = 1;
  std::uint64_t next_so_head_ = 1;
  std::uint64_t next_so_item_ = 1;
  std::uint64_t next_order_ = 1;
  std::uint64_t next_position_ = 1;

  EntityId open_lot_;
  std::int64_t lot_remaining_ = 0;
  std::size_t next_supplier_ = 0;
  std::vector<OrderState> orders_;  // index = order id - 1
};

}  // namespace plantpulse::sim
