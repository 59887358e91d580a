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

#include <string>
#include <vector>

#include "plantpulse/store/store.h"

namespace plantpulse::store {

/// Full-scan consistency check of the plant tables as seen by one snapshot:
/// dense IDs, referential integrity, per-row validation, disjoint seq-ordered
/// position intervals per production order, finished_at present exactly when
/// every position has left, and sales items matching their production order's
/// product. Returns one message per violation; empty means clean.
std::vector<std::string> check_integrity(const Store& store, const Snapshot& snap);

}  // namespace plantpulse::store
