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

#include "bdc/detection.h"

#include <cmath>

#include <fmt/format.h>

#include "bdc/session.h"

namespace bdc {

Proportion wilson_interval(uint64_t successes, uint64_t trials, double z) {
    Proportion p;
    p.successes = successes;
    p.trials = trials;
    if (trials == 0) {
        return p;
    }
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    p.rate = phat;
    p.ci_low = std::max(0.0, center - half);
    p.ci_high = std::min(1.0, center + half);
    return p;
}

bool within_binomial_band(uint64_t successes, uint64_t trials, double p, double sigmas) {
    if (trials == 0) {
        return false;
    }
    double n = static_cast<double>(trials);
    double observed = static_cast<double>(successes) / n;
    return std::abs(observed - p) <= sigmas * std::sqrt(p * (1 - p) / n);
}

double analytic_violation_rate(const EveStrategy &strategy) {
    switch (strategy.kind) {
        case EveKind::InterceptResendZ:
        case EveKind::InterceptResendX:
        case EveKind::InterceptResendRandom:
            return strategy.attacks(Leg::First) ? strategy.attack_probability / 4 : 0.0;
        case EveKind::SubstituteFresh:
            // A substituted C photon is |0⟩ while the partner is |0⟩ or |1⟩
            // with equal odds: Z checks fail half the time, X checks half.
            return strategy.attacks(Leg::First) ? strategy.attack_probability / 2 : 0.0;
        case EveKind::None:
            return 0.0;
    }
    return 0.0;
}

double analytic_first_check_abort_rate(const EveStrategy &strategy, size_t check_photons) {
    return 1.0 - std::pow(1.0 - analytic_violation_rate(strategy), static_cast<double>(check_photons));
}

DetectionStats estimate_detection(
    const EveStrategy &strategy, const ProtocolConfig &base, uint64_t trials, RandomStream &rng) {
    if (trials < 1) {
        throw std::invalid_argument("estimate_detection needs at least one trial");
    }
    ProtocolConfig config = base;
    config.eve = strategy;
    config.validate();

    uint64_t checked = 0;
    uint64_t violations = 0;
    uint64_t decoys = 0;
    uint64_t mismatches = 0;
    DetectionStats stats;
    for (uint64_t t = 0; t < trials; t++) {
        config.seed = rng.next_u64();
        RandomStream msg_rng = RandomStream(config.seed).split(0);
        auto alice_msg = random_message(config.alice_capacity_bits(), msg_rng);
        auto bob_msg = random_message(config.bob_capacity_bits(), msg_rng);
        auto transcript = run_protocol(config, alice_msg, bob_msg);
        if (transcript.first_check) {
            checked += transcript.first_check->checked;
            violations += transcript.first_check->violations;
        }
        if (transcript.second_check) {
            decoys += transcript.second_check->checked;
            mismatches += transcript.second_check->violations;
        }
        if (!transcript.verdict.completed) {
            if (transcript.verdict.phase == Phase::FirstCheck) {
                stats.first_check_aborts++;
            } else {
                stats.second_check_aborts++;
            }
        }
    }
    stats.per_photon = wilson_interval(violations, checked);
    stats.whole_protocol_abort = wilson_interval(stats.first_check_aborts + stats.second_check_aborts, trials);
    stats.per_decoy = wilson_interval(mismatches, decoys);
    return stats;
}

double plugin_mutual_information(const std::array<std::array<uint64_t, 4>, 4> &counts) {
    double total = 0;
    std::array<double, 4> row{};
    std::array<double, 4> col{};
    for (size_t x = 0; x < 4; x++) {
        for (size_t y = 0; y < 4; y++) {
            double c = static_cast<double>(counts[x][y]);
            total += c;
            row[x] += c;
            col[y] += c;
        }
    }
    if (total == 0) {
        return 0;
    }
    double mi = 0;
    for (size_t x = 0; x < 4; x++) {
        for (size_t y = 0; y < 4; y++) {
            double c = static_cast<double>(counts[x][y]);
            if (c > 0) {
                mi += c / total * std::log2(c * total / (row[x] * col[y]));
            }
        }
    }
    return std::max(0.0, mi);
}

void InformationAccumulator::add(const Transcript &transcript) {
    if (!transcript.verdict.completed) {
        return;
    }
    runs_++;
    for (const auto &g : transcript.eve.guesses) {
        const auto &ledger = transcript.pairs.at(g.pair_index);
        if (ledger.use != PairUse::Message || !ledger.alice_op || !ledger.bob_op) {
            continue;
        }
        pairs_++;
        alice_counts_[g.alice_bits.value()][code(*ledger.alice_op)]++;
        bob_counts_[g.bob_bits.value()][code(*ledger.bob_op)]++;
    }
}

InformationEstimate InformationAccumulator::estimate(uint64_t min_completed_runs) const {
    if (runs_ < min_completed_runs) {
        throw InsufficientSamples(
            fmt::format("need {} completed runs for an information estimate, have {}", min_completed_runs, runs_));
    }
    return {runs_, pairs_, plugin_mutual_information(alice_counts_), plugin_mutual_information(bob_counts_)};
}

InformationEstimate eve_information(std::span<const Transcript> runs, uint64_t min_completed_runs) {
    InformationAccumulator acc;
    for (const auto &t : runs) {
        acc.add(t);
    }
    return acc.estimate(min_completed_runs);
}

}  // namespace bdc
