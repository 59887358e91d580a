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

#include "plantpulse/sim/engine.h"

#include <cmath>

#include "plantpulse/domain/error.h"

namespace plantpulse::sim {

std::size_t EmittedBatch::row_count() const {
  return purchase_order_heads.size() + purchase_order_items.size() + sales_order_heads.size() +
         sales_order_items.size() + production_order_heads.size() +
         production_order_positions.size();
}

bool EmittedBatch::empty() const {
  return row_count() == 0 && positions_left.empty() && orders_finished.empty() &&
         sales_links.empty();
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// Rows created earlier in the same advance_to() call are patched in place
// instead of producing a fill-in.
template <typename Rows>
auto* in_batch(Rows& rows, std::uint64_t id) {
  using Ptr = decltype(&rows.front());
  if (rows.empty()) return Ptr{nullptr};
  std::uint64_t first = rows.front().id.value;
  if (id < first || id - first >= rows.size()) return Ptr{nullptr};
  return &rows[id - first];
}

}  // namespace

SimEngine::SimEngine(MasterData master, SimOptions options)
    : master_(std::move(master)), options_(options), rng_(options.seed) {
  auto problems = master_.validate();
  if (options_.arrival_mean_ms < 1) problems.push_back("arrival mean must be >= 1 ms");
  if (options_.lot_size < 1) problems.push_back("lot size must be >= 1");
  if (!problems.empty()) throw InvalidArgument("invalid master data: " + join(problems));
  schedule({Timestamp{draw_interarrival()}, 0, EventKind::kOrderArrival, {}, 0, {}});
}

bool SimEngine::start() { return running_ = true; }

bool SimEngine::stop() {
  running_ = false;
  return running_;
}

void SimEngine::schedule(SimEvent e) {
  e.seq = next_seq_++;
  queue_.push(e);
}

std::int64_t SimEngine::draw_interarrival() {
  std::exponential_distribution<double> gap(1.0 / static_cast<double>(options_.arrival_mean_ms));
  return static_cast<std::int64_t>(std::llround(gap(rng_)));
}

std::int64_t SimEngine::draw_duration(const RoutingStep& step) {
  if (step.duration_jitter == 0.0) return step.mean_duration_ms;
  double mean = static_cast<double>(step.mean_duration_ms);
  std::uniform_real_distribution<double> d(mean * (1.0 - step.duration_jitter),
                                           mean * (1.0 + step.duration_jitter));
  return std::max<std::int64_t>(1, std::llround(d(rng_)));
}

EmittedBatch SimEngine::advance_to(Timestamp t) {
  if (t < now_) {
    throw InvalidArgument("advance_to(" + std::to_string(t.millis) + ") is before now (" +
                          std::to_string(now_.millis) + ")");
  }
  EmittedBatch out;
  if (!running_) return out;
  while (!queue_.empty() && queue_.top().due <= t) {
    SimEvent e = queue_.top();
    queue_.pop();
    switch (e.kind) {
      case EventKind::kOrderArrival:
        on_arrival(e, out);
        break;
      case EventKind::kSalesBooking:
        on_sales_booking(e, out);
        break;
      case EventKind::kPositionEnter:
        on_enter(e, out);
        break;
      case EventKind::kPositionLeave:
        on_leave(e, out);
        break;
    }
  }
  now_ = t;
  return out;
}

void SimEngine::on_arrival(const SimEvent& e, EmittedBatch& out) {
  std::uniform_int_distribution<std::size_t> pick_product(0, master_.products.size() - 1);
  const Product& product = master_.products[pick_product(rng_)];

  if (lot_remaining_ == 0) {
    const Supplier& supplier = master_.suppliers[next_supplier_];
    next_supplier_ = (next_supplier_ + 1) % master_.suppliers.size();
    std::uniform_int_distribution<std::size_t> pick_material(0, master_.materials.size() - 1);
    const Material& material = master_.materials[pick_material(rng_)];
    EntityId head{next_po_head_++};
    out.purchase_order_heads.push_back({head, supplier.id, e.due});
    open_lot_ = EntityId{next_po_item_++};
    out.purchase_order_items.push_back({open_lot_, head, material.id, options_.lot_size});
    lot_remaining_ = options_.lot_size;
  }
  --lot_remaining_;

  EntityId order{next_order_++};
  out.production_order_heads.push_back(
      {order, product.id, open_lot_, std::nullopt, e.due, std::nullopt});
  orders_.push_back({product.id, master_.routings.at(product.id.value).size()});

  schedule({e.due, 0, EventKind::kSalesBooking, order, 0, {}});
  schedule({e.due, 0, EventKind::kPositionEnter, order, 0, {}});
  schedule({Timestamp{e.due.millis + draw_interarrival()}, 0, EventKind::kOrderArrival, {}, 0, {}});
}

void SimEngine::on_sales_booking(const SimEvent& e, EmittedBatch& out) {
  const OrderState& order = orders_[e.order.value - 1];
  std::uniform_int_distribution<std::size_t> pick_customer(0, master_.customers.size() - 1);
  const Customer& customer = master_.customers[pick_customer(rng_)];
  EntityId head{next_so_head_++};
  EntityId item{next_so_item_++};
  out.sales_order_heads.push_back({head, customer.id, e.due});
  out.sales_order_items.push_back({item, head, order.product_id, 1});
  if (auto* row = in_batch(out.production_order_heads, e.order.value)) {
    row->sales_order_item_id = item;
  } else {
    out.sales_links.push_back({e.order, item});
  }
}

void SimEngine::on_enter(const SimEvent& e, EmittedBatch& out) {
  const OrderState& order = orders_[e.order.value - 1];
  const RoutingStep& step = master_.routings.at(order.product_id.value)[e.step];
  EntityId position{next_position_++};
  out.production_order_positions.push_back({position, e.order, step.workplace_id,
                                             static_cast<std::int64_t>(e.step) + 1, e.due,
                                             std::nullopt});
  Timestamp leave{e.due.millis + draw_duration(step)};
  schedule({leave, 0, EventKind::kPositionLeave, e.order, e.step, position});
}

void SimEngine::on_leave(const SimEvent& e, EmittedBatch& out) {
  if (auto* row = in_batch(out.production_order_positions, e.position.value)) {
    row->left_at = e.due;
  } else {
    out.positions_left.push_back({e.position, e.due});
  }
  const OrderState& order = orders_[e.order.value - 1];
  if (e.step + 1 < order.routing_steps) {
    schedule({e.due, 0, EventKind::kPositionEnter, e.order, e.step + 1, {}});
    return;
  }
  if (auto* row = in_batch(out.production_order_heads, e.order.value)) {
    row->finished_at = e.due;
  } else {
    out.orders_finished.push_back({e.order, e.due});
  }
}

}  // namespace plantpulse::sim
