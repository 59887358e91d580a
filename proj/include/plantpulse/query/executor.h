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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "plantpulse/query/planner.h"
#include "plantpulse/store/store.h"

namespace plantpulse::query {

struct ResultTable {
  std::vector<ResultColumn> columns;
  std::vector<Row> rows;
  double elapsed_ms = 0.0;
};

struct ExecOptions {
  // Abort when any join stage produces more rows than this.
  std::uint64_t max_intermediate_rows = 50'000'000;
  std::chrono::milliseconds timeout{30'000};
};

/// Runs a plan against one snapshot. Throws ResourceExhausted when the row
/// guard or the timeout trips.
ResultTable execute(const Plan& plan, const store::Store& store, const store::Snapshot& snap,
                    const ExecOptions& options = {});

/// parse + plan + execute; elapsed_ms covers all three.
ResultTable execute_sql(std::string_view sql, const store::Store& store,
                        const store::Snapshot& snap, const ExecOptions& options = {});

struct ReadingMatch {
  std::uint64_t reading_id = 0;
  std::uint64_t position_id = 0;
  auto operator<=>(const ReadingMatch&) const = default;
};

/// Sensor readings paired with the production order positions whose
/// [ENTERED_AT, LEFT_AT] window contains them at the same workplace. Only
/// readings with a value in measurement_column take part; open positions
/// match nothing. Sorted by (reading_id, position_id).
std::vector<ReadingMatch> vertical_join(const store::Store& store, const store::Snapshot& snap,
                                        std::optional<EntityId> workplace,
                                        std::string_view measurement_column);

}  // namespace plantpulse::query
