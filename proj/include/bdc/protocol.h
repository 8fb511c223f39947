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

#ifndef BDC_PROTOCOL_H
#define BDC_PROTOCOL_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bdc/adversary.h"
#include "bdc/codec.h"
#include "bdc/qsim.h"

namespace bdc {

struct ConfigInvalid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CapacityExceeded : std::length_error {
    using std::length_error::length_error;
};

struct ProtocolConfig {
    size_t n_pairs = 16;
    /// Fraction of C photons Bob samples for the anticorrelation check.
    double check_fraction_1 = 0.25;
    /// Number of decoy positions Alice hides among her encoded M photons.
    size_t check_count_2 = 0;
    /// Maximum tolerated anticorrelation violations before aborting.
    size_t abort_threshold = 0;
    uint64_t seed = 0;
    EveStrategy eve;

    /// ceil(n_pairs * check_fraction_1).
    size_t first_check_count() const;
    /// Pairs left for encoding after the first check.
    size_t surviving_pairs() const;
    /// Alice loses the first-check pairs and the decoys.
    size_t alice_capacity_bits() const;
    /// Bob encodes on every surviving pair, decoys included.
    size_t bob_capacity_bits() const;

    /// Throws ConfigInvalid.
    void validate() const;

    /// Stable `key=value;...` rendering used for hashing and echoing.
    std::string canonical() const;
    /// FNV-1a over canonical().
    uint64_t hash() const;

    bool operator==(const ProtocolConfig &) const = default;
};

enum class Phase : uint8_t {
    Init,
    FirstTransmission,
    FirstCheck,
    Encoding,
    SecondTransmission,
    BellAnnounce,
    SecondCheck,
    Done,
    Aborted,
};

std::string_view name(Phase phase);
std::optional<Phase> parse_phase(std::string_view text);

/// True if a party may move from `from` to `to`: one step forward in the
/// fixed order, or into Aborted from any live phase.
bool is_valid_transition(Phase from, Phase to);

enum class Actor : uint8_t { System, Alice, Bob, Eve };

std::string_view name(Actor actor);
std::optional<Actor> parse_actor(std::string_view text);

// Public-channel messages. Per-index messages keep `indices` strictly
// increasing and parallel to their value vectors.

struct CheckIndices {
    std::vector<size_t> indices;
    bool operator==(const CheckIndices &) const = default;
};

struct BasisAnnounce {
    std::vector<size_t> indices;
    std::vector<Basis> bases;
    bool operator==(const BasisAnnounce &) const = default;
};

struct OutcomeAnnounce {
    std::vector<size_t> indices;
    std::vector<uint8_t> outcomes;
    bool operator==(const OutcomeAnnounce &) const = default;
};

enum class CheckKind : uint8_t { First, Second };

struct CheckVerdict {
    CheckKind check = CheckKind::First;
    bool passed = true;
    size_t violations = 0;
    size_t checked = 0;
    bool operator==(const CheckVerdict &) const = default;
};

struct SecondCheckIndices {
    std::vector<size_t> indices;
    bool operator==(const SecondCheckIndices &) const = default;
};

struct SecondCheckReveal {
    std::vector<size_t> indices;
    std::vector<PauliOp> ops;
    bool operator==(const SecondCheckReveal &) const = default;
};

struct BellResults {
    std::vector<size_t> indices;
    std::vector<BellState> results;
    bool operator==(const BellResults &) const = default;
};

struct Abort {
    std::string reason;
    bool operator==(const Abort &) const = default;
};

using ClassicalMessage = std::variant<
    CheckIndices,
    BasisAnnounce,
    OutcomeAnnounce,
    CheckVerdict,
    SecondCheckIndices,
    SecondCheckReveal,
    BellResults,
    Abort>;

/// Throws std::invalid_argument if indices are not strictly increasing,
/// fall outside [0, n_pairs), or disagree in length with their values.
void validate_message(const ClassicalMessage &message, size_t n_pairs);

}  // namespace bdc

#endif
