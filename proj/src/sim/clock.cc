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

#include "plantpulse/sim/clock.h"

#include <cmath>

#include "plantpulse/domain/error.h"

namespace plantpulse::sim {

std::string_view to_string(ClockMode mode) {
  return mode == ClockMode::kRealTime ? "realtime" : "stepped";
}

std::optional<ClockMode> parse_clock_mode(std::string_view name) {
  if (name == "realtime") return ClockMode::kRealTime;
  if (name == "stepped") return ClockMode::kStepped;
  return std::nullopt;
}

SimClock::SimClock(ClockMode mode, double scale) : mode_(mode), scale_(scale) {
  if (!(scale > 0.0)) throw InvalidArgument("clock scale must be > 0");
}

Timestamp SimClock::step(std::int64_t virtual_ms) {
  if (virtual_ms < 0) throw InvalidArgument("clock cannot step backwards");
  now_.millis += virtual_ms;
  return now_;
}

Timestamp SimClock::elapse(std::chrono::nanoseconds wall) {
  if (wall.count() < 0) throw InvalidArgument("clock cannot run backwards");
  double virtual_ms = static_cast<double>(wall.count()) / 1e6 * scale_ + carry_ms_;
  double whole = std::floor(virtual_ms);
  carry_ms_ = virtual_ms - whole;
  now_.millis += static_cast<std::int64_t>(whole);
  return now_;
}

}  // namespace plantpulse::sim
