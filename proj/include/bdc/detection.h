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

#ifndef BDC_DETECTION_H
#define BDC_DETECTION_H

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "bdc/adversary.h"
#include "bdc/protocol.h"
#include "bdc/random_stream.h"
#include "bdc/transcript.h"

namespace bdc {

struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two-sided normal quantile for 95% coverage.
constexpr double Z_95 = 1.959963984540054;

/// Binomial proportion with its Wilson score interval.
struct Proportion {
    uint64_t successes = 0;
    uint64_t trials = 0;
    double rate = 0;
    double ci_low = 0;
    double ci_high = 1;
};

Proportion wilson_interval(uint64_t successes, uint64_t trials, double z = Z_95);

/// |observed - p| <= sigmas * sqrt(p (1 - p) / trials).
bool within_binomial_band(uint64_t successes, uint64_t trials, double p, double sigmas = 3.0);

struct DetectionStats {
    /// Anticorrelation violations per first-check photon.
    Proportion per_photon;
    /// Fraction of runs that aborted in either check.
    Proportion whole_protocol_abort;
    /// Decoy mismatches per checked decoy, over runs that reached the second check.
    Proportion per_decoy;
    uint64_t first_check_aborts = 0;
    uint64_t second_check_aborts = 0;
};

/// Per-photon probability that `strategy` causes a first-check violation:
/// an intercept-resend attack on the first leg disturbs a check photon in
/// the conjugate basis half the time, and bases coincide half the time.
double analytic_violation_rate(const EveStrategy &strategy);

/// Probability that the first check aborts with `check_photons` samples and
/// a zero violation threshold.
double analytic_first_check_abort_rate(const EveStrategy &strategy, size_t check_photons);

/// Monte Carlo over `trials` independent runs of `base` (the strategy
/// replaces base.eve, the seed of each run is drawn from `rng`). Messages are
/// uniformly random and fill both capacities.
DetectionStats estimate_detection(
    const EveStrategy &strategy, const ProtocolConfig &base, uint64_t trials, RandomStream &rng);

/// Plug-in mutual information, in bits, of a joint count table over a
/// 4x4 alphabet.
double plugin_mutual_information(const std::array<std::array<uint64_t, 4>, 4> &counts);

struct InformationEstimate {
    uint64_t runs = 0;
    uint64_t pairs = 0;
    /// I(Eve's guess; Alice's bits) per pair.
    double alice_bits = 0;
    /// I(Eve's guess; Bob's bits) per pair.
    double bob_bits = 0;
};

/// Accumulates Eve's guesses against the true bit pairs at message (non-decoy,
/// non-check) positions of completed runs. Aborted runs are ignored.
class InformationAccumulator {
   public:
    void add(const Transcript &transcript);

    uint64_t completed_runs() const {
        return runs_;
    }

    /// Throws InsufficientSamples below `min_completed_runs`.
    InformationEstimate estimate(uint64_t min_completed_runs = 1) const;

   private:
    uint64_t runs_ = 0;
    uint64_t pairs_ = 0;
    std::array<std::array<uint64_t, 4>, 4> alice_counts_{};
    std::array<std::array<uint64_t, 4>, 4> bob_counts_{};
};

InformationEstimate eve_information(std::span<const Transcript> runs, uint64_t min_completed_runs = 1);

}  // namespace bdc

#endif
