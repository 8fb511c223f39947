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

#include "bdc/session.h"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace bdc {

namespace {

constexpr uint64_t ALICE_STREAM = 1;
constexpr uint64_t BOB_STREAM = 2;
constexpr uint64_t EVE_STREAM = 3;
constexpr uint64_t NATURE_STREAM = 4;

std::vector<size_t> complement(size_t n, const std::vector<size_t> &sorted_excluded) {
    std::vector<size_t> out;
    out.reserve(n - sorted_excluded.size());
    size_t k = 0;
    for (size_t i = 0; i < n; i++) {
        if (k < sorted_excluded.size() && sorted_excluded[k] == i) {
            k++;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

void transition(Phase &phase, Phase next, std::string_view who) {
    if (!is_valid_transition(phase, next)) {
        throw std::logic_error(fmt::format("{} cannot move from {} to {}", who, name(phase), name(next)));
    }
    phase = next;
}

}  // namespace

QuantumRegister::QuantumRegister(size_t n_pairs, EventLog &log, RandomStream nature)
    : log_(log), nature_(nature), states_(n_pairs, make_singlet()), custody_(n_pairs) {
}

void QuantumRegister::prepare(Actor owner) {
    if (owner != Actor::Alice && owner != Actor::Bob) {
        throw std::invalid_argument("only Alice or Bob can prepare pairs");
    }
    Custody c = owner == Actor::Alice ? Custody::Alice : Custody::Bob;
    std::fill(states_.begin(), states_.end(), make_singlet());
    std::fill(custody_.begin(), custody_.end(), std::array<Custody, 2>{c, c});
    Json p = Json::object();
    p["pairs"] = states_.size();
    p["state"] = name(BellState::PsiMinus);
    log_.emit(owner, "prepare", std::move(p));
}

QuantumRegister::Custody &QuantumRegister::custody(size_t index, QubitSlot slot) {
    return custody_.at(index)[static_cast<size_t>(slot)];
}

void QuantumRegister::require_held(Actor who, size_t index, QubitSlot slot) {
    Custody want = who == Actor::Alice ? Custody::Alice : who == Actor::Bob ? Custody::Bob : Custody::Consumed;
    if (want == Custody::Consumed || custody(index, slot) != want) {
        throw std::logic_error(
            fmt::format("{} does not hold photon {} of pair {}", name(who), name(slot), index));
    }
}

void QuantumRegister::transmit(
    Actor from,
    Actor to,
    std::span<const size_t> indices,
    Leg leg,
    const EveStrategy &eve,
    RandomStream &eve_rng) {
    QubitSlot slot = transiting_slot(leg);
    std::vector<TwoQubitState> in_flight;
    in_flight.reserve(indices.size());
    for (auto i : indices) {
        require_held(from, i, slot);
        custody(i, slot) = Custody::Channel;
        in_flight.push_back(states_[i]);
    }
    Json sent = Json::object();
    sent["leg"] = name(leg);
    sent["slot"] = name(slot);
    sent["to"] = name(to);
    sent["indices"] = std::vector<size_t>(indices.begin(), indices.end());
    log_.emit(from, "send", std::move(sent));

    auto result = transit(in_flight, indices, leg, eve, eve_rng);
    for (const auto &obs : result.record.observations) {
        Json p = Json::object();
        p["index"] = obs.pair_index;
        p["leg"] = name(obs.leg);
        p["slot"] = name(slot);
        p["action"] = obs.substituted ? "substitute" : "intercept_resend";
        p["basis"] = name(obs.basis);
        p["outcome"] = obs.outcome;
        log_.emit(Actor::Eve, "eve_attack", std::move(p));
    }

    Custody dest = to == Actor::Alice ? Custody::Alice : Custody::Bob;
    for (size_t k = 0; k < indices.size(); k++) {
        states_[indices[k]] = result.states[k];
        custody(indices[k], slot) = dest;
    }
    Json received = Json::object();
    received["leg"] = name(leg);
    received["slot"] = name(slot);
    received["indices"] = std::vector<size_t>(indices.begin(), indices.end());
    log_.emit(to, "receive", std::move(received));
}

uint8_t QuantumRegister::measure(Actor who, size_t index, QubitSlot slot, Basis basis) {
    require_held(who, index, slot);
    auto m = measure_qubit(states_[index], slot, basis, nature_);
    states_[index] = m.collapsed;
    custody(index, slot) = Custody::Consumed;
    Json p = Json::object();
    p["index"] = index;
    p["slot"] = name(slot);
    p["basis"] = name(basis);
    p["outcome"] = m.outcome;
    log_.emit(who, "measure", std::move(p));
    return m.outcome;
}

void QuantumRegister::apply(Actor who, size_t index, QubitSlot slot, PauliOp op, std::string_view purpose) {
    require_held(who, index, slot);
    states_[index] = apply_pauli(states_[index], op, slot);
    Json p = Json::object();
    p["index"] = index;
    p["slot"] = name(slot);
    p["op"] = name(op);
    if (!purpose.empty()) {
        p["purpose"] = purpose;
    }
    log_.emit(who, "encode", std::move(p));
}

BellState QuantumRegister::bell_measure(Actor who, size_t index) {
    require_held(who, index, QubitSlot::C);
    require_held(who, index, QubitSlot::M);
    BellState result = bdc::bell_measure(states_[index], nature_);
    custody(index, QubitSlot::C) = Custody::Consumed;
    custody(index, QubitSlot::M) = Custody::Consumed;
    Json p = Json::object();
    p["index"] = index;
    p["result"] = name(result);
    log_.emit(who, "bell_measure", std::move(p));
    return result;
}

const TwoQubitState &QuantumRegister::state(size_t index) const {
    return states_.at(index);
}

std::optional<Actor> QuantumRegister::holder(size_t index, QubitSlot slot) const {
    switch (custody_.at(index)[static_cast<size_t>(slot)]) {
        case Custody::Alice:
            return Actor::Alice;
        case Custody::Bob:
            return Actor::Bob;
        default:
            return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Alice

Alice::Alice(const ProtocolConfig &config, MessageBits message, size_t peer_payload_bits, RandomStream rng)
    : config_(config),
      message_(std::move(message)),
      peer_payload_bits_(peer_payload_bits),
      rng_(rng),
      ops_(config.n_pairs),
      announced_(config.n_pairs) {
}

void Alice::enter(Phase next) {
    transition(phase_, next, "alice");
}

void Alice::prepare(QuantumRegister &reg) {
    if (phase_ != Phase::Init) {
        throw std::logic_error("alice prepares pairs only once, before sending");
    }
    reg.prepare(Actor::Alice);
}

std::vector<size_t> Alice::send_c_photons() {
    enter(Phase::FirstTransmission);
    return complement(config_.n_pairs, {});
}

CheckVerdict Alice::first_check(
    QuantumRegister &reg,
    const CheckIndices &indices,
    const BasisAnnounce &bases,
    const OutcomeAnnounce &outcomes) {
    enter(Phase::FirstCheck);
    if (bases.indices != indices.indices || outcomes.indices != indices.indices) {
        throw std::invalid_argument("first-check announcements disagree on indices");
    }
    CheckVerdict v{CheckKind::First, true, 0, indices.indices.size()};
    for (size_t k = 0; k < indices.indices.size(); k++) {
        uint8_t mine = reg.measure(Actor::Alice, indices.indices[k], QubitSlot::M, bases.bases[k]);
        if (mine == outcomes.outcomes[k]) {
            v.violations++;
        }
    }
    v.passed = v.violations <= config_.abort_threshold;
    checked_ = indices.indices;
    surviving_ = complement(config_.n_pairs, checked_);
    return v;
}

void Alice::encode(QuantumRegister &reg) {
    enter(Phase::Encoding);
    decoys_.clear();
    for (auto k : rng_.sample_without_replacement(surviving_.size(), config_.check_count_2)) {
        decoys_.push_back(surviving_[k]);
    }
    auto padded = message_.padded_to(config_.alice_capacity_bits());
    size_t next_pair = 0;
    size_t d = 0;
    for (auto i : surviving_) {
        if (d < decoys_.size() && decoys_[d] == i) {
            d++;
            ops_[i] = pauli_from_code(static_cast<uint8_t>(rng_.below(4)));
            reg.apply(Actor::Alice, i, QubitSlot::M, *ops_[i], name(PairUse::Decoy));
        } else {
            ops_[i] = op_for_bits(padded.pair(next_pair++));
            reg.apply(Actor::Alice, i, QubitSlot::M, *ops_[i], name(PairUse::Message));
        }
    }
}

std::vector<size_t> Alice::send_m_photons() {
    enter(Phase::SecondTransmission);
    return surviving_;
}

void Alice::receive_results(const BellResults &results) {
    enter(Phase::BellAnnounce);
    if (results.indices != surviving_) {
        throw std::invalid_argument("Bell results must cover exactly the surviving pairs");
    }
    for (size_t k = 0; k < results.indices.size(); k++) {
        announced_[results.indices[k]] = results.results[k];
    }
}

SecondCheckIndices Alice::open_second_check() {
    enter(Phase::SecondCheck);
    return SecondCheckIndices{decoys_};
}

SecondCheckReveal Alice::reveal_decoys() const {
    SecondCheckReveal r{decoys_, {}};
    for (auto i : decoys_) {
        r.ops.push_back(*ops_[i]);
    }
    return r;
}

CheckVerdict Alice::second_check(const SecondCheckReveal &bob_reveal) {
    if (phase_ != Phase::SecondCheck) {
        throw std::logic_error("alice verifies decoys only during the second check");
    }
    if (bob_reveal.indices != decoys_) {
        throw std::invalid_argument("bob revealed ops at the wrong positions");
    }
    CheckVerdict v{CheckKind::Second, true, 0, decoys_.size()};
    for (size_t k = 0; k < decoys_.size(); k++) {
        size_t i = decoys_[k];
        if (expected_bell(*ops_[i], bob_reveal.ops[k]) != *announced_[i]) {
            v.violations++;
        }
    }
    v.passed = v.violations == 0;
    second_check_passed_ = v.passed;
    return v;
}

MessageBits Alice::decode() {
    if (!second_check_passed_) {
        throw std::logic_error("alice decodes only after a passed second check");
    }
    enter(Phase::Done);
    std::vector<BitPair> pairs;
    pairs.reserve(surviving_.size());
    for (auto i : surviving_) {
        pairs.push_back(decode_bob(*ops_[i], *announced_[i]));
    }
    auto raw = MessageBits::from_pairs(pairs, 0);
    if (raw.size() != config_.bob_capacity_bits()) {
        throw std::logic_error("alice decoded a message of the wrong length");
    }
    return raw.with_payload_size(peer_payload_bits_).stripped();
}

void Alice::abort() {
    enter(Phase::Aborted);
}

// ---------------------------------------------------------------------------
// Bob

Bob::Bob(const ProtocolConfig &config, MessageBits message, size_t peer_payload_bits, RandomStream rng)
    : config_(config),
      message_(std::move(message)),
      peer_payload_bits_(peer_payload_bits),
      rng_(rng),
      ops_(config.n_pairs),
      announced_(config.n_pairs) {
}

void Bob::enter(Phase next) {
    transition(phase_, next, "bob");
}

void Bob::receive_c_photons() {
    enter(Phase::FirstTransmission);
}

CheckIndices Bob::choose_check_indices() {
    enter(Phase::FirstCheck);
    checked_ = rng_.sample_without_replacement(config_.n_pairs, config_.first_check_count());
    surviving_ = complement(config_.n_pairs, checked_);
    return CheckIndices{checked_};
}

std::pair<BasisAnnounce, OutcomeAnnounce> Bob::measure_checks(QuantumRegister &reg) {
    if (phase_ != Phase::FirstCheck) {
        throw std::logic_error("bob measures check photons only during the first check");
    }
    BasisAnnounce bases{checked_, {}};
    OutcomeAnnounce outcomes{checked_, {}};
    for (auto i : checked_) {
        Basis b = rng_.coin() ? Basis::X : Basis::Z;
        bases.bases.push_back(b);
        outcomes.outcomes.push_back(reg.measure(Actor::Bob, i, QubitSlot::C, b));
    }
    return {std::move(bases), std::move(outcomes)};
}

void Bob::accept_first_verdict(const CheckVerdict &verdict) {
    enter(verdict.passed ? Phase::Encoding : Phase::Aborted);
}

void Bob::receive_m_photons() {
    enter(Phase::SecondTransmission);
}

BellResults Bob::encode_measure_announce(QuantumRegister &reg) {
    enter(Phase::BellAnnounce);
    auto padded = message_.padded_to(config_.bob_capacity_bits());
    BellResults results{surviving_, {}};
    size_t next_pair = 0;
    for (auto i : surviving_) {
        ops_[i] = op_for_bits(padded.pair(next_pair++));
        QubitSlot slot = rng_.coin() ? QubitSlot::M : QubitSlot::C;
        reg.apply(Actor::Bob, i, slot, *ops_[i]);
        announced_[i] = reg.bell_measure(Actor::Bob, i);
        results.results.push_back(*announced_[i]);
    }
    return results;
}

SecondCheckReveal Bob::reveal_ops(const SecondCheckIndices &decoys) {
    enter(Phase::SecondCheck);
    decoys_ = decoys.indices;
    SecondCheckReveal r{decoys_, {}};
    for (auto i : decoys_) {
        if (!ops_.at(i)) {
            throw std::invalid_argument(fmt::format("decoy position {} was never encoded by bob", i));
        }
        r.ops.push_back(*ops_[i]);
    }
    return r;
}

void Bob::accept_second_verdict(const CheckVerdict &verdict) {
    if (!verdict.passed) {
        enter(Phase::Aborted);
    }
}

MessageBits Bob::decode() {
    enter(Phase::Done);
    std::vector<BitPair> pairs;
    pairs.reserve(surviving_.size());
    size_t d = 0;
    for (auto i : surviving_) {
        if (d < decoys_.size() && decoys_[d] == i) {
            d++;
            continue;
        }
        pairs.push_back(decode_alice(*ops_[i], *announced_[i]));
    }
    auto raw = MessageBits::from_pairs(pairs, 0);
    if (raw.size() != config_.alice_capacity_bits()) {
        throw std::logic_error("bob decoded a message of the wrong length");
    }
    return raw.with_payload_size(peer_payload_bits_).stripped();
}

void Bob::abort() {
    enter(Phase::Aborted);
}

// ---------------------------------------------------------------------------

namespace {

class PublicChannel {
   public:
    PublicChannel(EventLog &log, size_t n_pairs) : log_(log), n_pairs_(n_pairs) {
    }

    template <typename M>
    M post(Actor from, const M &message) {
        validate_message(message, n_pairs_);
        log_.post(from, message);
        return message;
    }

   private:
    EventLog &log_;
    size_t n_pairs_;
};

void emit_abort(EventLog &log, Phase phase, std::string_view reason) {
    log.post(Actor::Alice, Abort{std::string(reason)});
    Json p = Json::object();
    p["status"] = "aborted";
    p["phase"] = name(phase);
    p["reason"] = reason;
    log.emit(Actor::System, "verdict", std::move(p));
}

}  // namespace

Transcript run_protocol(const ProtocolConfig &config, const MessageBits &alice_msg, const MessageBits &bob_msg) {
    config.validate();
    if (alice_msg.size() > config.alice_capacity_bits()) {
        throw CapacityExceeded(fmt::format(
            "alice's message needs {} bits but capacity is {}", alice_msg.size(), config.alice_capacity_bits()));
    }
    if (bob_msg.size() > config.bob_capacity_bits()) {
        throw CapacityExceeded(fmt::format(
            "bob's message needs {} bits but capacity is {}", bob_msg.size(), config.bob_capacity_bits()));
    }

    RandomStream root(config.seed);
    RandomStream eve_rng = root.split(EVE_STREAM);
    EventLog log;
    {
        Json head = Json::object();
        head["version"] = BDC_VERSION;
        head["config"] = config_to_json(config);
        head["config_hash"] = fmt::format("{:016x}", config.hash());
        head["alice_capacity_bits"] = config.alice_capacity_bits();
        head["bob_capacity_bits"] = config.bob_capacity_bits();
        head["alice_msg"] = alice_msg.payload_str();
        head["bob_msg"] = bob_msg.payload_str();
        log.emit(Actor::System, "config", std::move(head));
    }

    QuantumRegister reg(config.n_pairs, log, root.split(NATURE_STREAM));
    PublicChannel channel(log, config.n_pairs);
    Alice alice(config, alice_msg, bob_msg.payload_size(), root.split(ALICE_STREAM));
    Bob bob(config, bob_msg, alice_msg.payload_size(), root.split(BOB_STREAM));

    auto finish = [&]() { return Transcript::from_events(log.take()); };

    // First transmission: C photons to Bob.
    alice.prepare(reg);
    auto c_photons = alice.send_c_photons();
    reg.transmit(Actor::Alice, Actor::Bob, c_photons, Leg::First, config.eve, eve_rng);
    bob.receive_c_photons();

    // First check: anticorrelation on a random sample in random bases.
    const auto check = channel.post(Actor::Bob, bob.choose_check_indices());
    auto [bases, outcomes] = bob.measure_checks(reg);
    channel.post(Actor::Bob, bases);
    channel.post(Actor::Bob, outcomes);
    const auto first = alice.first_check(reg, check, bases, outcomes);
    channel.post(Actor::Alice, first);
    bob.accept_first_verdict(first);
    if (!first.passed) {
        alice.abort();
        emit_abort(log, Phase::FirstCheck, "first_check_failed");
        return finish();
    }

    // Encoding and second transmission: M photons to Bob.
    alice.encode(reg);
    auto m_photons = alice.send_m_photons();
    reg.transmit(Actor::Alice, Actor::Bob, m_photons, Leg::Second, config.eve, eve_rng);
    bob.receive_m_photons();

    // Bob's encoding, Bell measurements and public announcement.
    const auto results = bob.encode_measure_announce(reg);
    channel.post(Actor::Bob, results);
    alice.receive_results(results);

    // Second check: indices, then Bob's ops, then Alice's decoy ops.
    const auto decoys = alice.open_second_check();
    channel.post(Actor::Alice, decoys);
    const auto bob_reveal = bob.reveal_ops(decoys);
    channel.post(Actor::Bob, bob_reveal);
    channel.post(Actor::Alice, alice.reveal_decoys());
    const auto second = alice.second_check(bob_reveal);
    channel.post(Actor::Alice, second);
    bob.accept_second_verdict(second);
    if (!second.passed) {
        alice.abort();
        emit_abort(log, Phase::SecondCheck, "second_check_failed");
        return finish();
    }

    auto bob_decoded = bob.decode();
    auto alice_decoded = alice.decode();
    Json p = Json::object();
    p["status"] = "completed";
    p["alice_decoded"] = alice_decoded.payload_str();
    p["bob_decoded"] = bob_decoded.payload_str();
    log.emit(Actor::System, "verdict", std::move(p));
    return finish();
}

Transcript replay(const Transcript &transcript) {
    return run_protocol(transcript.config, transcript.alice_msg, transcript.bob_msg);
}

}  // namespace bdc
