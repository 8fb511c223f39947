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

#include "bdc/adversary.h"

#include <stdexcept>

namespace bdc {

std::string_view name(EveKind kind) {
    switch (kind) {
        case EveKind::None:
            return "none";
        case EveKind::InterceptResendZ:
            return "intercept-z";
        case EveKind::InterceptResendX:
            return "intercept-x";
        case EveKind::InterceptResendRandom:
            return "intercept-rand";
        case EveKind::SubstituteFresh:
            return "substitute";
    }
    throw std::logic_error("unknown EveKind");
}

std::string_view name(Leg leg) {
    return leg == Leg::First ? "first" : "second";
}

std::string_view name(LegSelection legs) {
    switch (legs) {
        case LegSelection::First:
            return "first";
        case LegSelection::Second:
            return "second";
        case LegSelection::Both:
            return "both";
    }
    throw std::logic_error("unknown LegSelection");
}

std::optional<EveKind> parse_eve_kind(std::string_view text) {
    for (auto k : {EveKind::None, EveKind::InterceptResendZ, EveKind::InterceptResendX,
                   EveKind::InterceptResendRandom, EveKind::SubstituteFresh}) {
        if (name(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<Leg> parse_leg(std::string_view text) {
    if (text == "first") return Leg::First;
    if (text == "second") return Leg::Second;
    return std::nullopt;
}

std::optional<LegSelection> parse_leg_selection(std::string_view text) {
    for (auto l : {LegSelection::First, LegSelection::Second, LegSelection::Both}) {
        if (name(l) == text) {
            return l;
        }
    }
    return std::nullopt;
}

LegSelection EveStrategy::default_legs(EveKind kind) {
    return kind == EveKind::SubstituteFresh ? LegSelection::Second : LegSelection::First;
}

EveStrategy EveStrategy::make(EveKind kind, double attack_probability) {
    EveStrategy s{kind, attack_probability, default_legs(kind)};
    s.validate();
    return s;
}

bool EveStrategy::attacks(Leg leg) const {
    if (kind == EveKind::None) {
        return false;
    }
    switch (legs) {
        case LegSelection::First:
            return leg == Leg::First;
        case LegSelection::Second:
            return leg == Leg::Second;
        case LegSelection::Both:
            return true;
    }
    return false;
}

void EveStrategy::validate() const {
    if (!(attack_probability >= 0.0 && attack_probability <= 1.0)) {
        throw std::invalid_argument("eve attack probability must lie in [0, 1]");
    }
}

void EveRecord::append(const EveRecord &other) {
    observations.insert(observations.end(), other.observations.begin(), other.observations.end());
    guesses.insert(guesses.end(), other.guesses.begin(), other.guesses.end());
}

TransitResult transit(
    std::span<const TwoQubitState> states,
    std::span<const size_t> pair_indices,
    Leg leg,
    const EveStrategy &strategy,
    RandomStream &rng) {
    if (states.size() != pair_indices.size()) {
        throw std::invalid_argument("transit needs one pair index per state");
    }
    TransitResult result{{states.begin(), states.end()}, {}};
    if (!strategy.attacks(leg)) {
        return result;
    }
    QubitSlot slot = transiting_slot(leg);
    for (size_t k = 0; k < states.size(); k++) {
        if (!rng.bernoulli(strategy.attack_probability)) {
            continue;
        }
        Basis basis = Basis::Z;
        bool substitute = false;
        switch (strategy.kind) {
            case EveKind::InterceptResendZ:
                break;
            case EveKind::InterceptResendX:
                basis = Basis::X;
                break;
            case EveKind::InterceptResendRandom:
                basis = rng.coin() ? Basis::X : Basis::Z;
                break;
            case EveKind::SubstituteFresh:
                // Eve keeps the photon and measures it at leisure; the
                // partner is left in the matching reduced state.
                substitute = true;
                break;
            case EveKind::None:
                continue;
        }
        auto m = measure_qubit(result.states[k], slot, basis, rng);
        TwoQubitState forwarded = m.collapsed;
        if (substitute && m.outcome == 1) {
            // The kept photon collapsed to |1⟩; the fresh one is |0⟩.
            forwarded = apply_pauli(forwarded, PauliOp::U2, slot);
        }
        result.states[k] = forwarded;
        result.record.observations.push_back({pair_indices[k], leg, basis, m.outcome, substitute});
    }
    return result;
}

EveGuess guess_from_announcement(size_t pair_index, BellState announced) {
    BitPair guess(index(announced));
    return {pair_index, guess, guess};
}

}  // namespace bdc
