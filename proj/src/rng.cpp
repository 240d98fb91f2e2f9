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

#include "clab/rng.hpp"

#include <cmath>
#include <numbers>

namespace clab {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Stream Stream::derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = mix64(master_seed + kGamma);
    for (const std::uint64_t id : path) {
        key = mix64(key ^ mix64(id + kGamma));
    }
    return Stream(key);
}

Stream Stream::split(std::uint64_t id) const { return Stream(mix64(key_ ^ mix64(id + kGamma))); }

Stream::result_type Stream::operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double Stream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Stream::normal() {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace clab
