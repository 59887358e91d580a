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

#include "plantpulse/store/integrity.h"

#include <algorithm>
#include <map>

#include "plantpulse/domain/validate.h"

namespace plantpulse::store {

namespace {

struct PositionView {
  std::int64_t seq_no;
  std::int64_t entered;
  std::optional<std::int64_t> left;
  std::uint64_t id;
};

std::optional<std::int64_t> opt_int(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> check_integrity(const Store& store, const Snapshot& snap) {
  std::vector<std::string> out;
  const SchemaCatalog cat = store.catalog();

  for (const auto& t : cat.tables()) {
    TableId tid = store.table_id(t.name);
    std::uint64_t n = snap.rows(tid);
    for (std::uint64_t r = 0; r < n; ++r) {
      Row row = store.read_row(snap, t.name, r);
      std::string where = t.name + " row " + std::to_string(r + 1);
      if (opt_int(row[0]) != static_cast<std::int64_t>(r + 1)) {
        out.push_back(where + ": ID is not " + std::to_string(r + 1));
      }
      for (const auto& v : validate_row(t, row)) out.push_back(where + ": " + v.code);
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const auto& col = t.columns[c];
        if (col.references.empty()) continue;
        auto key = opt_int(row[c]);
        if (!key) continue;
        std::uint64_t limit = snap.rows(store.table_id(col.references));
        if (*key < 1 || static_cast<std::uint64_t>(*key) > limit) {
          out.push_back(where + ": " + col.name + " " + std::to_string(*key) + " dangles");
        }
      }
    }
  }

  const auto* heads_schema = cat.find(tables::kProductionOrderHead);
  const auto* pos_schema = cat.find(tables::kProductionOrderPosition);
  if (!heads_schema || !pos_schema) return out;

  std::map<std::int64_t, std::vector<PositionView>> by_head;
  {
    ColumnBatch b = store.scan(snap, tables::kProductionOrderPosition,
                               std::vector<std::string>{"ID", "HEAD_ID", "SEQ_NO", "ENTERED_AT", "LEFT_AT"});
    for (std::size_t i = 0; i < b.rows(); ++i) {
      PositionView p{b.columns[2].ints[i], b.columns[3].ints[i], std::nullopt,
                     static_cast<std::uint64_t>(b.columns[0].ints[i])};
      if (!b.columns[4].null_at(i)) p.left = b.columns[4].ints[i];
      by_head[b.columns[1].ints[i]].push_back(p);
    }
  }
  for (auto& [head, positions] : by_head) {
    std::sort(positions.begin(), positions.end(),
              [](const PositionView& a, const PositionView& b) { return a.seq_no < b.seq_no; });
    for (std::size_t i = 1; i < positions.size(); ++i) {
      const auto& prev = positions[i - 1];
      const auto& cur = positions[i];
      std::string where = "PRODUCTION_ORDER_HEAD " + std::to_string(head);
      if (cur.seq_no == prev.seq_no) out.push_back(where + ": duplicate SEQ_NO");
      if (!prev.left) {
        out.push_back(where + ": position " + std::to_string(cur.id) + " entered before step " +
                      std::to_string(prev.seq_no) + " left");
      } else if (cur.entered < *prev.left) {
        out.push_back(where + ": position " + std::to_string(cur.id) + " overlaps its predecessor");
      }
    }
  }

  ColumnBatch heads = store.scan(snap, tables::kProductionOrderHead,
                                 std::vector<std::string>{"ID", "PRODUCT_ID", "SALES_ORDER_ITEM_ID", "FINISHED_AT"});
  ColumnBatch items = store.scan(snap, tables::kSalesOrderItem, std::vector<std::string>{"PRODUCT_ID"});
  for (std::size_t i = 0; i < heads.rows(); ++i) {
    std::int64_t id = heads.columns[0].ints[i];
    std::string where = "PRODUCTION_ORDER_HEAD " + std::to_string(id);
    bool finished = !heads.columns[3].null_at(i);
    auto it = by_head.find(id);
    bool all_left = it != by_head.end() &&
                    std::all_of(it->second.begin(), it->second.end(),
                                [](const PositionView& p) { return p.left.has_value(); });
    if (finished != all_left) {
      out.push_back(where + (finished ? ": finished with open positions"
                                      : ": all positions left but not finished"));
    }
    if (!heads.columns[2].null_at(i)) {
      auto item = static_cast<std::size_t>(heads.columns[2].ints[i]);
      if (item >= 1 && item <= items.rows() &&
          items.columns[0].ints[item - 1] != heads.columns[1].ints[i]) {
        out.push_back(where + ": sales item product differs from order product");
      }
    }
  }
  return out;
}

}  // namespace plantpulse::store
