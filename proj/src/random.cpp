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

#include "losr/random.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace losr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)), static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                      static_cast<std::uint32_t>(splitmix64(index ^ 0xa5a5a5a5a5a5a5a5ULL)),
                      static_cast<std::uint32_t>(splitmix64(index ^ 0xa5a5a5a5a5a5a5a5ULL) >> 32)};
    return Rng(seq);
}

std::vector<std::uint64_t> sample_multinomial(Rng &rng, std::uint64_t trials, std::span<const double> probs) {
    std::vector<std::uint64_t> out(probs.size(), 0);
    std::size_t last = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            last = i;
        }
    }
    if (last == probs.size()) {
        return out;
    }
    double remaining_mass = std::accumulate(probs.begin(), probs.begin() + last + 1, 0.0,
                                            [](double acc, double p) { return acc + std::max(p, 0.0); });
    std::uint64_t remaining = trials;
    for (std::size_t i = 0; i < last && remaining > 0; ++i) {
        if (probs[i] <= 0.0) {
            continue;
        }
        const double q = std::clamp(probs[i] / remaining_mass, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> bin(remaining, q);
        out[i] = bin(rng);
        remaining -= out[i];
        remaining_mass -= probs[i];
    }
    out[last] = remaining;
    return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body) {
    const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace losr
