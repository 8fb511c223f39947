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

#include "bdc/qsim.h"

#include <cmath>
#include <stdexcept>

namespace bdc {

namespace {

constexpr double INV_SQRT2 = 0.70710678118654752440;

std::array<Amplitude, 4> apply_local(const std::array<Amplitude, 4> &amps, const Matrix2 &u, QubitSlot slot) {
    std::array<Amplitude, 4> out{};
    for (size_t c = 0; c < 2; c++) {
        for (size_t m = 0; m < 2; m++) {
            Amplitude acc = 0;
            for (size_t k = 0; k < 2; k++) {
                if (slot == QubitSlot::C) {
                    acc += u[c * 2 + k] * amps[k * 2 + m];
                } else {
                    acc += u[m * 2 + k] * amps[c * 2 + k];
                }
            }
            out[c * 2 + m] = acc;
        }
    }
    return out;
}

double norm_squared_of(const std::array<Amplitude, 4> &amps) {
    double t = 0;
    for (const auto &a : amps) {
        t += std::norm(a);
    }
    return t;
}

Matrix2 projector(Basis basis, uint8_t outcome) {
    if (basis == Basis::Z) {
        return outcome == 0 ? Matrix2{1, 0, 0, 0} : Matrix2{0, 0, 0, 1};
    }
    return outcome == 0 ? Matrix2{0.5, 0.5, 0.5, 0.5} : Matrix2{0.5, -0.5, -0.5, 0.5};
}

}  // namespace

std::string_view name(PauliOp op) {
    constexpr std::array<std::string_view, 4> names{"U0", "U1", "U2", "U3"};
    return names[code(op)];
}

std::string_view name(BellState b) {
    constexpr std::array<std::string_view, 4> names{"PsiMinus", "PsiPlus", "PhiMinus", "PhiPlus"};
    return names[index(b)];
}

std::string_view name(Basis b) {
    return b == Basis::Z ? "Z" : "X";
}

std::string_view name(QubitSlot s) {
    return s == QubitSlot::C ? "C" : "M";
}

std::optional<PauliOp> parse_pauli(std::string_view text) {
    for (auto op : ALL_PAULI_OPS) {
        if (name(op) == text) {
            return op;
        }
    }
    return std::nullopt;
}

std::optional<BellState> parse_bell(std::string_view text) {
    for (auto b : ALL_BELL_STATES) {
        if (name(b) == text) {
            return b;
        }
    }
    return std::nullopt;
}

std::optional<Basis> parse_basis(std::string_view text) {
    for (auto b : ALL_BASES) {
        if (name(b) == text) {
            return b;
        }
    }
    return std::nullopt;
}

std::optional<QubitSlot> parse_slot(std::string_view text) {
    for (auto s : ALL_SLOTS) {
        if (name(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

Matrix2 pauli_matrix(PauliOp op) {
    switch (op) {
        case PauliOp::U0:
            return {1, 0, 0, 1};
        case PauliOp::U1:
            return {1, 0, 0, -1};
        case PauliOp::U2:
            return {0, 1, 1, 0};
        case PauliOp::U3:
            // iσy = |0⟩⟨1| - |1⟩⟨0|
            return {0, 1, -1, 0};
    }
    throw std::logic_error("unknown PauliOp");
}

TwoQubitState::TwoQubitState(const std::array<Amplitude, 4> &amplitudes) : amps_(amplitudes) {
    if (std::abs(norm_squared_of(amps_) - 1.0) > STATE_TOLERANCE) {
        throw std::invalid_argument("TwoQubitState amplitudes are not normalized");
    }
}

TwoQubitState TwoQubitState::renormalized(const std::array<Amplitude, 4> &amplitudes) {
    double n2 = norm_squared_of(amplitudes);
    if (!(n2 > STATE_TOLERANCE)) {
        throw std::logic_error("cannot renormalize a zero-probability branch");
    }
    double s = 1.0 / std::sqrt(n2);
    std::array<Amplitude, 4> out;
    for (size_t k = 0; k < 4; k++) {
        out[k] = amplitudes[k] * s;
    }
    return TwoQubitState(out);
}

double TwoQubitState::norm_squared() const {
    return norm_squared_of(amps_);
}

TwoQubitState TwoQubitState::with_global_phase(Amplitude phase) const {
    std::array<Amplitude, 4> out;
    for (size_t k = 0; k < 4; k++) {
        out[k] = amps_[k] * phase;
    }
    return renormalized(out);
}

TwoQubitState make_singlet() {
    return TwoQubitState({0, INV_SQRT2, -INV_SQRT2, 0});
}

TwoQubitState make_product(bool c, bool m) {
    std::array<Amplitude, 4> amps{};
    amps[(c ? 2 : 0) + (m ? 1 : 0)] = 1;
    return TwoQubitState(amps);
}

TwoQubitState bell_vector(BellState b) {
    switch (b) {
        case BellState::PsiMinus:
            return TwoQubitState({0, INV_SQRT2, -INV_SQRT2, 0});
        case BellState::PsiPlus:
            return TwoQubitState({0, INV_SQRT2, INV_SQRT2, 0});
        case BellState::PhiMinus:
            return TwoQubitState({INV_SQRT2, 0, 0, -INV_SQRT2});
        case BellState::PhiPlus:
            return TwoQubitState({INV_SQRT2, 0, 0, INV_SQRT2});
    }
    throw std::logic_error("unknown BellState");
}

TwoQubitState apply_single_qubit(const TwoQubitState &state, const Matrix2 &u, QubitSlot slot) {
    return TwoQubitState::renormalized(apply_local(state.amplitudes(), u, slot));
}

TwoQubitState apply_pauli(const TwoQubitState &state, PauliOp op, QubitSlot slot) {
    return apply_single_qubit(state, pauli_matrix(op), slot);
}

std::array<double, 2> outcome_probabilities(const TwoQubitState &state, QubitSlot slot, Basis basis) {
    std::array<double, 2> p;
    for (uint8_t k = 0; k < 2; k++) {
        p[k] = norm_squared_of(apply_local(state.amplitudes(), projector(basis, k), slot));
    }
    return p;
}

Measurement measure_qubit(const TwoQubitState &state, QubitSlot slot, Basis basis, RandomStream &rng) {
    auto p = outcome_probabilities(state, slot, basis);
    for (auto &v : p) {
        if (v < STATE_TOLERANCE) {
            v = 0;
        }
    }
    uint8_t outcome = rng.uniform() * (p[0] + p[1]) < p[0] ? 0 : 1;
    if (p[outcome] < STATE_TOLERANCE) {
        throw std::logic_error("measure_qubit selected a zero-probability branch");
    }
    auto projected = apply_local(state.amplitudes(), projector(basis, outcome), slot);
    return Measurement{outcome, TwoQubitState::renormalized(projected)};
}

Amplitude inner_product(const TwoQubitState &bra, const TwoQubitState &ket) {
    Amplitude acc = 0;
    for (size_t k = 0; k < 4; k++) {
        acc += std::conj(bra[k]) * ket[k];
    }
    return acc;
}

std::array<double, 4> bell_probabilities(const TwoQubitState &state) {
    std::array<double, 4> p;
    for (auto b : ALL_BELL_STATES) {
        p[index(b)] = std::norm(inner_product(bell_vector(b), state));
    }
    return p;
}

BellState bell_measure(TwoQubitState state, RandomStream &rng) {
    auto p = bell_probabilities(state);
    double total = 0;
    for (auto &v : p) {
        if (v < STATE_TOLERANCE) {
            v = 0;
        }
        total += v;
    }
    double u = rng.uniform() * total;
    uint8_t chosen = 3;
    double cumulative = 0;
    for (uint8_t k = 0; k < 4; k++) {
        cumulative += p[k];
        if (u < cumulative) {
            chosen = k;
            break;
        }
    }
    // Rounding can leave u == total; fall back to the last populated outcome.
    while (p[chosen] == 0 && chosen > 0) {
        chosen--;
    }
    if (p[chosen] < STATE_TOLERANCE) {
        throw std::logic_error("bell_measure selected a zero-probability branch");
    }
    return bell_from_index(chosen);
}

std::optional<BellState> deterministic_bell(const TwoQubitState &state) {
    auto p = bell_probabilities(state);
    for (auto b : ALL_BELL_STATES) {
        if (std::abs(p[index(b)] - 1.0) < STATE_TOLERANCE) {
            return b;
        }
    }
    return std::nullopt;
}

bool equal_up_to_phase(const TwoQubitState &a, const TwoQubitState &b, double tolerance) {
    return std::abs(std::abs(inner_product(a, b)) - 1.0) < tolerance;
}

}  // namespace bdc
