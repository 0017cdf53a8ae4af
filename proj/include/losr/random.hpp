// Copyright 2026 The losr Authors
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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace losr {

using Rng = std::mt19937_64;

/// Engine for substream `index` of `seed`. Streams for distinct indices are
/// decorrelated through a splitmix64 finalizer, so work split by index gives the
/// same result whatever order or thread it runs on.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Multinomial draw of `trials` over weights `probs` (need not be normalized),
/// by sequential conditional binomials.
std::vector<std::uint64_t> sample_multinomial(Rng &rng, std::uint64_t trials, std::span<const double> probs);

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// body must only touch state owned by index i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

}  // namespace losr
