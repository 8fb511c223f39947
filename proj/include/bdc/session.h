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

#ifndef BDC_SESSION_H
#define BDC_SESSION_H

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "bdc/adversary.h"
#include "bdc/codec.h"
#include "bdc/protocol.h"
#include "bdc/qsim.h"
#include "bdc/random_stream.h"
#include "bdc/transcript.h"

namespace bdc {

/// Owns every EPR pair of a block and tracks which party holds each photon.
///
/// All quantum operations go through here, are checked against custody and
/// are written to the event log. Born-rule sampling draws from the
/// register's own stream, separate from any party's choices.
class QuantumRegister {
   public:
    QuantumRegister(size_t n_pairs, EventLog &log, RandomStream nature);

    size_t size() const {
        return states_.size();
    }

    /// Fills the block with singlets held entirely by `owner`.
    void prepare(Actor owner);

    /// Moves one photon of each listed pair from `from` to `to` over the
    /// quantum channel, exposing it to `eve` on the way.
    void transmit(
        Actor from,
        Actor to,
        std::span<const size_t> indices,
        Leg leg,
        const EveStrategy &eve,
        RandomStream &eve_rng);

    /// Measures and consumes one photon.
    uint8_t measure(Actor who, size_t index, QubitSlot slot, Basis basis);

    /// `purpose` is logged verbatim when non-empty.
    void apply(Actor who, size_t index, QubitSlot slot, PauliOp op, std::string_view purpose = {});

    /// Bell-measures and consumes both photons of a pair.
    BellState bell_measure(Actor who, size_t index);

    const TwoQubitState &state(size_t index) const;
    /// Actor::System stands for "in transit or consumed".
    std::optional<Actor> holder(size_t index, QubitSlot slot) const;

   private:
    enum class Custody : uint8_t { Alice, Bob, Channel, Consumed };

    Custody &custody(size_t index, QubitSlot slot);
    void require_held(Actor who, size_t index, QubitSlot slot);

    EventLog &log_;
    RandomStream nature_;
    std::vector<TwoQubitState> states_;
    std::vector<std::array<Custody, 2>> custody_;
};

/// Sender of the EPR block. Encodes on M photons and audits the second
/// transmission with decoys.
class Alice {
   public:
    Alice(const ProtocolConfig &config, MessageBits message, size_t peer_payload_bits, RandomStream rng);

    Phase phase() const {
        return phase_;
    }

    void prepare(QuantumRegister &reg);
    /// Indices of the C photons to send to Bob.
    std::vector<size_t> send_c_photons();

    /// Measures the partners of Bob's check photons in his bases and counts
    /// equal outcomes as violations.
    CheckVerdict first_check(
        QuantumRegister &reg,
        const CheckIndices &indices,
        const BasisAnnounce &bases,
        const OutcomeAnnounce &outcomes);

    /// Picks decoy positions, then applies message ops in index order to the
    /// remaining M photons and random recorded ops to the decoys.
    void encode(QuantumRegister &reg);
    std::vector<size_t> send_m_photons();

    void receive_results(const BellResults &results);
    SecondCheckIndices open_second_check();
    SecondCheckReveal reveal_decoys() const;
    /// Each decoy's announced result must equal expected_bell of the revealed ops.
    CheckVerdict second_check(const SecondCheckReveal &bob_reveal);

    /// Bob's message, padding stripped. Moves to Done.
    MessageBits decode();
    void abort();

    const std::vector<size_t> &decoys() const {
        return decoys_;
    }
    const std::vector<size_t> &surviving() const {
        return surviving_;
    }

   private:
    void enter(Phase next);

    ProtocolConfig config_;
    MessageBits message_;
    size_t peer_payload_bits_;
    RandomStream rng_;
    Phase phase_ = Phase::Init;
    std::vector<size_t> checked_;
    std::vector<size_t> surviving_;
    std::vector<size_t> decoys_;
    std::vector<std::optional<PauliOp>> ops_;
    std::vector<std::optional<BellState>> announced_;
    bool second_check_passed_ = false;
};

/// Receiver of the block. Runs the first check, adds his own encoding on a
/// random photon of each pair, and announces Bell results.
class Bob {
   public:
    Bob(const ProtocolConfig &config, MessageBits message, size_t peer_payload_bits, RandomStream rng);

    Phase phase() const {
        return phase_;
    }

    void receive_c_photons();
    CheckIndices choose_check_indices();
    /// Measures each check photon in a uniformly random basis.
    std::pair<BasisAnnounce, OutcomeAnnounce> measure_checks(QuantumRegister &reg);
    void accept_first_verdict(const CheckVerdict &verdict);

    void receive_m_photons();
    BellResults encode_measure_announce(QuantumRegister &reg);

    SecondCheckReveal reveal_ops(const SecondCheckIndices &decoys);
    void accept_second_verdict(const CheckVerdict &verdict);

    /// Alice's message, padding stripped. Moves to Done.
    MessageBits decode();
    void abort();

   private:
    void enter(Phase next);

    ProtocolConfig config_;
    MessageBits message_;
    size_t peer_payload_bits_;
    RandomStream rng_;
    Phase phase_ = Phase::Init;
    std::vector<size_t> checked_;
    std::vector<size_t> surviving_;
    std::vector<size_t> decoys_;
    std::vector<std::optional<PauliOp>> ops_;
    std::vector<std::optional<BellState>> announced_;
};

/// Runs one block end to end. Throws ConfigInvalid or CapacityExceeded
/// before any event is produced.
Transcript run_protocol(const ProtocolConfig &config, const MessageBits &alice_msg, const MessageBits &bob_msg);

/// Re-runs a transcript's config and messages.
Transcript replay(const Transcript &transcript);

}  // namespace bdc

#endif
