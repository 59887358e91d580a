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

#include <atomic>
#include <cstddef>
#include <memory>

#include "plantpulse/domain/error.h"

namespace plantpulse::store {

inline constexpr std::size_t kChunkShift = 14;
inline constexpr std::size_t kChunkSize = std::size_t{1} << kChunkShift;

// Growable array whose elements never move. The chunk directory is sized
// once from the element cap, so readers can index published elements while
// the single writer keeps appending chunks.
template <typename T>
class ChunkedArray {
 public:
  explicit ChunkedArray(std::size_t max_elements)
      : max_chunks_((max_elements + kChunkSize - 1) / kChunkSize + 1),
        dir_(std::make_unique<std::atomic<T*>[]>(max_chunks_)) {}

  ~ChunkedArray() {
    for (std::size_t i = 0; i < max_chunks_; ++i) delete[] dir_[i].load(std::memory_order_relaxed);
  }

  ChunkedArray(const ChunkedArray&) = delete;
  ChunkedArray& operator=(const ChunkedArray&) = delete;

  // Writer only: make room for n elements.
  void reserve(std::size_t n) {
    std::size_t need = (n + kChunkSize - 1) / kChunkSize;
    if (need > max_chunks_) throw CapacityExceeded("column capacity exhausted");
    std::size_t have = chunks_.load(std::memory_order_relaxed);
    for (; have < need; ++have) {
      dir_[have].store(new T[kChunkSize](), std::memory_order_release);
    }
    chunks_.store(have, std::memory_order_release);
  }

  T& operator[](std::size_t i) {
    return dir_[i >> kChunkShift].load(std::memory_order_acquire)[i & (kChunkSize - 1)];
  }
  const T& operator[](std::size_t i) const {
    return dir_[i >> kChunkShift].load(std::memory_order_acquire)[i & (kChunkSize - 1)];
  }

  std::size_t allocated_bytes() const {
    return chunks_.load(std::memory_order_acquire) * kChunkSize * sizeof(T);
  }

 private:
  std::size_t max_chunks_;
  std::unique_ptr<std::atomic<T*>[]> dir_;
  std::atomic<std::size_t> chunks_{0};
};

}  // namespace plantpulse::store
