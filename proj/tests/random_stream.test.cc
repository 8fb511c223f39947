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

#include <gtest/gtest.h>

#include <set>

using namespace bdc;

TEST(RandomStream, same_seed_same_sequence) {
    RandomStream a(42);
    RandomStream b(42);
    for (int k = 0; k < 100; k++) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
    RandomStream c(43);
    ASSERT_NE(RandomStream(42).next_u64(), c.next_u64());
}

TEST(RandomStream, split_ignores_parent_consumption) {
    RandomStream a(7);
    RandomStream b(7);
    for (int k = 0; k < 10; k++) {
        b.next_u64();
    }
    auto ca = a.split(3);
    auto cb = b.split(3);
    ASSERT_EQ(ca.next_u64(), cb.next_u64());
    ASSERT_NE(a.split(3).next_u64(), a.split(4).next_u64());
    ASSERT_NE(a.split(3).seed(), a.seed());
}

TEST(RandomStream, uniform_and_below_ranges) {
    RandomStream r(1);
    std::array<int, 5> counts{};
    for (int k = 0; k < 50000; k++) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        counts[r.below(5)]++;
    }
    for (int c : counts) {
        // 10000 expected, sd ~ 89.
        ASSERT_NEAR(c, 10000, 450);
    }
    ASSERT_THROW(r.below(0), std::invalid_argument);
}

TEST(RandomStream, bernoulli_edges) {
    RandomStream r(2);
    for (int k = 0; k < 100; k++) {
        ASSERT_TRUE(r.bernoulli(1.0));
        ASSERT_FALSE(r.bernoulli(0.0));
    }
}

TEST(RandomStream, sample_without_replacement) {
    RandomStream r(3);
    for (int trial = 0; trial < 200; trial++) {
        size_t n = 1 + r.below(40);
        size_t k = r.below(n + 1);
        auto s = r.sample_without_replacement(n, k);
        ASSERT_EQ(s.size(), k);
        ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
        ASSERT_EQ(std::set<size_t>(s.begin(), s.end()).size(), k);
        for (auto v : s) {
            ASSERT_LT(v, n);
        }
    }
    ASSERT_THROW(r.sample_without_replacement(3, 4), std::invalid_argument);

    // Every element of [0, 10) is picked with probability 3/10.
    std::array<int, 10> hits{};
    for (int t = 0; t < 20000; t++) {
        for (auto v : r.sample_without_replacement(10, 3)) {
            hits[v]++;
        }
    }
    for (int h : hits) {
        ASSERT_NEAR(h, 6000, 6 * std::sqrt(20000 * 0.3 * 0.7));
    }
}
