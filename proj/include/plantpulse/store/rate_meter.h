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
#include <mutex>
#include <vector>

namespace plantpulse::store {

/// Sliding-window row counter. Rows are credited to the wall-clock second in
/// which they arrive; rate() averages the last window_s completed seconds.
class RateMeter {
 public:
  explicit RateMeter(int window_s = 10);

  void credit(std::uint64_t rows, std::int64_t wall_second);

  /// Rows credited during [now - window_s, now - 1], divided by window_s.
  double rate(std::int64_t now_second) const;

  /// All rows ever credited.
  std::uint64_t total() const;

  int window_s() const { return window_s_; }

 private:
  struct Bucket {
    std::int64_t second = INT64_MIN;
    std::uint64_t rows = 0;
  };

  void roll(std::int64_t second) const;

  int window_s_;
  mutable std::mutex mu_;
  // Completed seconds; exactly window_s_ slots.
  mutable std::vector<Bucket> ring_;
  mutable Bucket current_;
  std::uint64_t total_ = 0;
};

}  // namespace plantpulse::store
