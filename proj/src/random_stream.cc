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

#include "bdc/random_stream.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bdc {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {
}

uint64_t RandomStream::next_u64() {
    return engine_();
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RandomStream::below(uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("RandomStream::below requires n > 0");
    }
    // Rejection sampling on the top of the range keeps the result unbiased.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    while (true) {
        uint64_t r = next_u64();
        if (r < limit) {
            return r % n;
        }
    }
}

bool RandomStream::coin() {
    return (next_u64() >> 63) != 0;
}

bool RandomStream::bernoulli(double p) {
    if (p >= 1.0) {
        return true;
    }
    if (p <= 0.0) {
        return false;
    }
    return uniform() < p;
}

RandomStream RandomStream::split(uint64_t stream_id) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(stream_id ^ 0xd1b54a32d192ed03ULL)));
}

std::vector<size_t> RandomStream::sample_without_replacement(size_t n, size_t k) {
    if (k > n) {
        throw std::invalid_argument("cannot sample more items than the population holds");
    }
    std::vector<size_t> pool(n);
    std::iota(pool.begin(), pool.end(), size_t{0});
    // Partial Fisher-Yates.
    for (size_t i = 0; i < k; i++) {
        size_t j = i + static_cast<size_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace bdc
