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
#include <string>
#include <string_view>
#include <vector>

#include "plantpulse/domain/rows.h"

namespace plantpulse::sim {

struct RoutingStep {
  EntityId workplace_id;
  std::int64_t mean_duration_ms = 5000;
  // Durations are drawn uniformly from mean * [1 - jitter, 1 + jitter].
  double duration_jitter = 0.2;

  bool operator==(const RoutingStep&) const = default;
};

struct MasterData {
  std::vector<Supplier> suppliers;
  std::vector<Customer> customers;
  std::vector<Product> products;
  std::vector<Material> materials;
  std::vector<Workplace> workplaces;
  // product id -> ordered steps
  std::map<std::uint64_t, std::vector<RoutingStep>> routings;

  /// The engine factory: 3 suppliers, 2 customers, Engine A/B, 2 materials
  /// and 4 workplaces; every product routes Cutting Machine -> Assembly.
  static MasterData defaults();

  /// Empty when valid: non-empty lists, dense ids from 1, a non-empty routing
  /// per product over existing workplaces, mean >= 1 and jitter in [0, 1).
  std::vector<std::string> validate() const;

  std::vector<EntityId> workplace_ids() const;
  /// Workplace id by exact name; 0 when absent.
  EntityId workplace_named(std::string_view name) const;
};

/// Reads master-data overrides from a JSON document. Lists given as arrays of
/// names replace the defaults (ids assigned 1..n); "routings" maps product
/// name to [{"workplace": name, "mean_duration_ms": n, "duration_jitter": f}];
/// products without an explicit routing inherit the default route.
/// Throws InvalidArgument with every problem found.
MasterData parse_master_data(std::string_view json_text, std::int64_t* arrival_mean_ms = nullptr);

}  // namespace plantpulse::sim
