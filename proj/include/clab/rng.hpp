// Copyright 2026 The collective-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace clab {

/// Counter-based random stream (SplitMix64 sequence). Streams are derived from a
/// master seed and a path of integer ids, so trial (s, i, r, k) always sees the same
/// numbers regardless of which worker runs it. Satisfies UniformRandomBitGenerator.
class Stream {
  public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t key) : key_(key) {}

    static Stream derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

    /// Child stream keyed by this stream's key and `id`; does not advance this stream.
    [[nodiscard]] Stream split(std::uint64_t id) const;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal variate (Box-Muller, no caching).
    double normal();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

} // namespace clab
