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

#ifndef BDC_ADVERSARY_H
#define BDC_ADVERSARY_H

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bdc/codec.h"
#include "bdc/qsim.h"
#include "bdc/random_stream.h"

namespace bdc {

enum class EveKind : uint8_t {
    None,
    InterceptResendZ,
    InterceptResendX,
    InterceptResendRandom,
    SubstituteFresh,
};

/// Quantum channel leg: C photons travel on the first, M photons on the second.
enum class Leg : uint8_t { First = 0, Second = 1 };

enum class LegSelection : uint8_t { First, Second, Both };

std::string_view name(EveKind kind);
std::string_view name(Leg leg);
std::string_view name(LegSelection legs);
std::optional<EveKind> parse_eve_kind(std::string_view text);
std::optional<Leg> parse_leg(std::string_view text);
std::optional<LegSelection> parse_leg_selection(std::string_view text);

constexpr QubitSlot transiting_slot(Leg leg) {
    return leg == Leg::First ? QubitSlot::C : QubitSlot::M;
}

/// Individual (per-photon) eavesdropping strategy.
struct EveStrategy {
    EveKind kind = EveKind::None;
    /// Probability that any given transiting photon is attacked.
    double attack_probability = 1.0;
    LegSelection legs = LegSelection::First;

    /// Intercept-resend variants default to the first leg, where the
    /// anticorrelation check sees them. SubstituteFresh defaults to the
    /// second leg, where only the decoy check can.
    static EveStrategy make(EveKind kind, double attack_probability = 1.0);
    static LegSelection default_legs(EveKind kind);

    bool attacks(Leg leg) const;
    /// Throws std::invalid_argument if attack_probability is outside [0, 1].
    void validate() const;

    bool operator==(const EveStrategy &) const = default;
};

struct EveObservation {
    size_t pair_index;
    Leg leg;
    Basis basis;
    uint8_t outcome;
    /// True if Eve kept the photon and forwarded a fresh |0⟩ instead.
    bool substituted;

    bool operator==(const EveObservation &) const = default;
};

/// Eve's best guess of both parties' bits at one pair, formed from the
/// public Bell announcement.
struct EveGuess {
    size_t pair_index;
    BitPair alice_bits;
    BitPair bob_bits;

    bool operator==(const EveGuess &) const = default;
};

struct EveRecord {
    std::vector<EveObservation> observations;
    std::vector<EveGuess> guesses;

    void append(const EveRecord &other);
    bool operator==(const EveRecord &) const = default;
};

struct TransitResult {
    std::vector<TwoQubitState> states;
    EveRecord record;
};

/// Sends one photon of each pair across the quantum channel. `states[k]` is
/// the pair with index `pair_indices[k]`; the photon in transiting_slot(leg)
/// is the one exposed to Eve.
TransitResult transit(
    std::span<const TwoQubitState> states,
    std::span<const size_t> pair_indices,
    Leg leg,
    const EveStrategy &strategy,
    RandomStream &rng);

/// Eve's guess once a Bell result is public: with the other party's op
/// unknown, the announced index itself is her best estimate of either side.
EveGuess guess_from_announcement(size_t pair_index, BellState announced);

}  // namespace bdc

#endif
