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

#ifndef BDC_QSIM_H
#define BDC_QSIM_H

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>

#include "bdc/random_stream.h"

namespace bdc {

using Amplitude = std::complex<double>;

/// Tolerance used for normalization, orthogonality and degenerate-branch checks.
constexpr double STATE_TOLERANCE = 1e-12;

/// The four local encoding operations. The enumerator value is the 2-bit
/// message code: U0=I (00), U1=σz (01), U2=σx (10), U3=iσy (11).
enum class PauliOp : uint8_t { U0 = 0, U1 = 1, U2 = 2, U3 = 3 };

/// Single-qubit measurement observable.
enum class Basis : uint8_t { Z = 0, X = 1 };

/// Bell states with their canonical 2-bit index. The index equals the code of
/// the PauliOp that carries |Ψ−⟩ to that state when applied to either photon.
enum class BellState : uint8_t { PsiMinus = 0, PsiPlus = 1, PhiMinus = 2, PhiPlus = 3 };

/// Which photon of an EPR pair an operation targets.
enum class QubitSlot : uint8_t { C = 0, M = 1 };

constexpr std::array<PauliOp, 4> ALL_PAULI_OPS{PauliOp::U0, PauliOp::U1, PauliOp::U2, PauliOp::U3};
constexpr std::array<BellState, 4> ALL_BELL_STATES{
    BellState::PsiMinus, BellState::PsiPlus, BellState::PhiMinus, BellState::PhiPlus};
constexpr std::array<QubitSlot, 2> ALL_SLOTS{QubitSlot::C, QubitSlot::M};
constexpr std::array<Basis, 2> ALL_BASES{Basis::Z, Basis::X};

constexpr uint8_t code(PauliOp op) {
    return static_cast<uint8_t>(op);
}
constexpr uint8_t index(BellState b) {
    return static_cast<uint8_t>(b);
}
constexpr PauliOp pauli_from_code(uint8_t c) {
    return static_cast<PauliOp>(c & 3);
}
constexpr BellState bell_from_index(uint8_t i) {
    return static_cast<BellState>(i & 3);
}

std::string_view name(PauliOp op);
std::string_view name(BellState b);
std::string_view name(Basis b);
std::string_view name(QubitSlot s);

std::optional<PauliOp> parse_pauli(std::string_view text);
std::optional<BellState> parse_bell(std::string_view text);
std::optional<Basis> parse_basis(std::string_view text);
std::optional<QubitSlot> parse_slot(std::string_view text);

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Amplitude, 4>;

Matrix2 pauli_matrix(PauliOp op);

/// Pure state of one EPR pair over |00⟩,|01⟩,|10⟩,|11⟩ with the C photon as
/// the high (first) qubit and the M photon as the low (second) qubit.
class TwoQubitState {
   public:
    /// Throws std::invalid_argument unless the amplitudes are normalized.
    explicit TwoQubitState(const std::array<Amplitude, 4> &amplitudes);

    const std::array<Amplitude, 4> &amplitudes() const {
        return amps_;
    }
    const Amplitude &operator[](size_t k) const {
        return amps_[k];
    }

    double norm_squared() const;

    /// Multiplies every amplitude by a unit-modulus phase.
    TwoQubitState with_global_phase(Amplitude phase) const;

    bool operator==(const TwoQubitState &other) const = default;

    /// Rescales to unit norm. Throws std::logic_error on a (near-)zero vector.
    static TwoQubitState renormalized(const std::array<Amplitude, 4> &amplitudes);

   private:
    std::array<Amplitude, 4> amps_;
};

TwoQubitState make_singlet();

/// |c⟩_C |m⟩_M.
TwoQubitState make_product(bool c, bool m);

TwoQubitState bell_vector(BellState b);

/// Applies `op` to the photon in `slot` ((op ⊗ I) for C, (I ⊗ op) for M).
TwoQubitState apply_pauli(const TwoQubitState &state, PauliOp op, QubitSlot slot);

/// Applies an arbitrary unitary to one photon. The result is renormalized
/// to absorb rounding.
TwoQubitState apply_single_qubit(const TwoQubitState &state, const Matrix2 &u, QubitSlot slot);

struct Measurement {
    uint8_t outcome;
    TwoQubitState collapsed;
};

/// Born-rule probabilities of outcomes 0 and 1. For the X basis outcome 0 is
/// the +1 eigenstate (|0⟩+|1⟩)/√2.
std::array<double, 2> outcome_probabilities(const TwoQubitState &state, QubitSlot slot, Basis basis);

Measurement measure_qubit(const TwoQubitState &state, QubitSlot slot, Basis basis, RandomStream &rng);

/// |⟨bell|state⟩|² in canonical index order.
std::array<double, 4> bell_probabilities(const TwoQubitState &state);

/// Samples a Bell-basis outcome. The pair is consumed.
BellState bell_measure(TwoQubitState state, RandomStream &rng);

/// The Bell state `state` is proportional to, if it is one (within tolerance).
std::optional<BellState> deterministic_bell(const TwoQubitState &state);

bool equal_up_to_phase(const TwoQubitState &a, const TwoQubitState &b, double tolerance = STATE_TOLERANCE);

Amplitude inner_product(const TwoQubitState &bra, const TwoQubitState &ket);

}  // namespace bdc

#endif
