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

#include "bdc/protocol.h"

#include <array>
#include <cmath>

#include <fmt/format.h>

namespace bdc {

size_t ProtocolConfig::first_check_count() const {
    // The small slack keeps fractions like 4/64 from rounding up past an
    // exact integer product.
    return static_cast<size_t>(std::ceil(static_cast<double>(n_pairs) * check_fraction_1 - 1e-9));
}

size_t ProtocolConfig::surviving_pairs() const {
    return n_pairs - first_check_count();
}

size_t ProtocolConfig::alice_capacity_bits() const {
    return 2 * (surviving_pairs() - check_count_2);
}

size_t ProtocolConfig::bob_capacity_bits() const {
    return 2 * surviving_pairs();
}

void ProtocolConfig::validate() const {
    if (n_pairs == 0) {
        throw ConfigInvalid("n_pairs must be positive");
    }
    if (!(check_fraction_1 > 0.0 && check_fraction_1 < 1.0)) {
        throw ConfigInvalid("check_fraction_1 must lie strictly between 0 and 1");
    }
    if (first_check_count() >= n_pairs) {
        throw ConfigInvalid(fmt::format(
            "first check would consume all {} pairs (check_fraction_1={})", n_pairs, check_fraction_1));
    }
    if (check_count_2 >= surviving_pairs()) {
        throw ConfigInvalid(fmt::format(
            "check_count_2={} must be below the {} pairs surviving the first check", check_count_2,
            surviving_pairs()));
    }
    try {
        eve.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigInvalid(e.what());
    }
}

std::string ProtocolConfig::canonical() const {
    return fmt::format(
        "n_pairs={};check_fraction_1={};check_count_2={};abort_threshold={};seed={};eve={};eve_prob={};eve_legs={}",
        n_pairs, check_fraction_1, check_count_2, abort_threshold, seed, name(eve.kind),
        eve.attack_probability, name(eve.legs));
}

uint64_t ProtocolConfig::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x00000100000001b3ULL;
    }
    return h;
}

namespace {
constexpr std::array<std::string_view, 9> PHASE_NAMES{
    "Init", "FirstTransmission", "FirstCheck", "Encoding", "SecondTransmission",
    "BellAnnounce", "SecondCheck", "Done", "Aborted"};
constexpr std::array<std::string_view, 4> ACTOR_NAMES{"system", "alice", "bob", "eve"};

template <typename T>
void check_lengths(const std::vector<size_t> &indices, const std::vector<T> &values) {
    if (indices.size() != values.size()) {
        throw std::invalid_argument("message indices and values differ in length");
    }
}

void check_indices(const std::vector<size_t> &indices, size_t n_pairs) {
    for (size_t k = 0; k < indices.size(); k++) {
        if (indices[k] >= n_pairs) {
            throw std::invalid_argument(fmt::format("pair index {} out of range", indices[k]));
        }
        if (k > 0 && indices[k] <= indices[k - 1]) {
            throw std::invalid_argument("message indices must be strictly increasing");
        }
    }
}
}  // namespace

std::string_view name(Phase phase) {
    return PHASE_NAMES[static_cast<size_t>(phase)];
}

std::optional<Phase> parse_phase(std::string_view text) {
    for (size_t k = 0; k < PHASE_NAMES.size(); k++) {
        if (PHASE_NAMES[k] == text) {
            return static_cast<Phase>(k);
        }
    }
    return std::nullopt;
}

bool is_valid_transition(Phase from, Phase to) {
    if (from == Phase::Done || from == Phase::Aborted) {
        return false;
    }
    if (to == Phase::Aborted) {
        return true;
    }
    return static_cast<int>(to) == static_cast<int>(from) + 1;
}

std::string_view name(Actor actor) {
    return ACTOR_NAMES[static_cast<size_t>(actor)];
}

std::optional<Actor> parse_actor(std::string_view text) {
    for (size_t k = 0; k < ACTOR_NAMES.size(); k++) {
        if (ACTOR_NAMES[k] == text) {
            return static_cast<Actor>(k);
        }
    }
    return std::nullopt;
}

void validate_message(const ClassicalMessage &message, size_t n_pairs) {
    std::visit(
        [&](const auto &m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, CheckIndices> || std::is_same_v<M, SecondCheckIndices>) {
                check_indices(m.indices, n_pairs);
            } else if constexpr (std::is_same_v<M, BasisAnnounce>) {
                check_lengths(m.indices, m.bases);
                check_indices(m.indices, n_pairs);
            } else if constexpr (std::is_same_v<M, OutcomeAnnounce>) {
                check_lengths(m.indices, m.outcomes);
                check_indices(m.indices, n_pairs);
                for (auto o : m.outcomes) {
                    if (o > 1) throw std::invalid_argument("measurement outcome must be 0 or 1");
                }
            } else if constexpr (std::is_same_v<M, SecondCheckReveal>) {
                check_lengths(m.indices, m.ops);
                check_indices(m.indices, n_pairs);
            } else if constexpr (std::is_same_v<M, BellResults>) {
                check_lengths(m.indices, m.results);
                check_indices(m.indices, n_pairs);
            }
        },
        message);
}

}  // namespace bdc
