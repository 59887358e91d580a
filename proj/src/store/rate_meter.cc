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

#include "plantpulse/store/rate_meter.h"

#include "plantpulse/domain/error.h"

namespace plantpulse::store {

RateMeter::RateMeter(int window_s) : window_s_(window_s) {
  if (window_s < 1) throw InvalidArgument("rate window must be at least one second");
  ring_.resize(static_cast<std::size_t>(window_s));
}

void RateMeter::roll(std::int64_t second) const {
  if (second <= current_.second) return;
  if (current_.second != INT64_MIN) {
    auto slot = static_cast<std::size_t>(current_.second % window_s_);
    ring_[slot] = current_;
  }
  current_ = Bucket{second, 0};
}

void RateMeter::credit(std::uint64_t rows, std::int64_t wall_second) {
  std::lock_guard lock(mu_);
  roll(wall_second);
  // Late credits (clock skew between callers) land in the current second.
  current_.rows += rows;
  total_ += rows;
}

double RateMeter::rate(std::int64_t now_second) const {
  std::lock_guard lock(mu_);
  roll(now_second);
  std::uint64_t sum = 0;
  for (const auto& b : ring_) {
    if (b.second >= now_second - window_s_ && b.second < now_second) sum += b.rows;
  }
  return static_cast<double>(sum) / window_s_;
}

std::uint64_t RateMeter::total() const {
  std::lock_guard lock(mu_);
  return total_;
}

}  // namespace plantpulse::store
