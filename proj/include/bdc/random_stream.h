// Copyright 2026 The bdc Authors
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

#ifndef BDC_RANDOM_STREAM_H
#define BDC_RANDOM_STREAM_H

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace bdc {

/// Seedable, splittable source of randomness.
///
/// Every random choice in the simulator (party choices, Born-rule sampling,
/// eavesdropper actions) draws from a RandomStream, so a run is a pure
/// function of its seed. Only the raw 64-bit engine output is used; the
/// bounded and floating-point helpers are implemented here rather than with
/// <random> distributions, whose output is implementation-defined.
class RandomStream {
   public:
    explicit RandomStream(uint64_t seed);

    uint64_t seed() const {
        return seed_;
    }

    uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform();

    /// Uniform integer in [0, n). Requires n > 0.
    uint64_t below(uint64_t n);

    bool coin();

    /// True with probability p.
    bool bernoulli(double p);

    /// Derives an independent child stream. The child depends only on this
    /// stream's seed and `stream_id`, not on how much has been consumed.
    RandomStream split(uint64_t stream_id) const;

    /// `k` distinct values drawn uniformly from [0, n), sorted ascending.
    std::vector<size_t> sample_without_replacement(size_t n, size_t k);

   private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

uint64_t splitmix64(uint64_t x);

}  // namespace bdc

#endif
