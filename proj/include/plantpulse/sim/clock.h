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

#include "plantpulse/domain/types.h"

namespace plantpulse::sim {

enum class ClockMode { kRealTime, kStepped };

std::string_view to_string(ClockMode mode);
std::optional<ClockMode> parse_clock_mode(std::string_view name);

/// Virtual simulation clock. In RealTime mode elapsed wall time is scaled
/// into virtual time; in Stepped mode time only moves through step().
class SimClock {
 public:
  SimClock(ClockMode mode = ClockMode::kStepped, double scale = 1.0);

  ClockMode mode() const { return mode_; }
  double scale() const { return scale_; }
  Timestamp now() const { return now_; }

  /// Stepped mode: advance by a virtual amount.
  Timestamp step(std::int64_t virtual_ms);

  /// RealTime mode: advance by wall time times scale. Fractions of a virtual
  /// millisecond carry over to the next call.
  Timestamp elapse(std::chrono::nanoseconds wall);

 private:
  ClockMode mode_;
  double scale_;
  Timestamp now_;
  double carry_ms_ = 0.0;
};

}  // namespace plantpulse::sim
