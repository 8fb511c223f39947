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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "bdc/detection.h"

using namespace bdc;

namespace {

ProtocolConfig make_config(size_t n, double fraction, size_t decoys, uint64_t seed, EveStrategy eve = {}) {
    ProtocolConfig c;
    c.n_pairs = n;
    c.check_fraction_1 = fraction;
    c.check_count_2 = decoys;
    c.seed = seed;
    c.eve = eve;
    return c;
}

MessageBits zeros(size_t bits) {
    return MessageBits::from_bits(std::vector<uint8_t>(bits, 0));
}

const Event *find_event(const Transcript &t, Actor actor, std::string_view kind, size_t index) {
    for (const auto &e : t.events) {
        if (e.actor == actor && e.kind == kind && e.payload.contains("index") &&
            e.payload["index"].get<size_t>() == index) {
            return &e;
        }
    }
    return nullptr;
}

}  // namespace

TEST(session, config_capacities) {
    auto c = make_config(16, 0.25, 2, 0);
    EXPECT_EQ(c.first_check_count(), 4u);
    EXPECT_EQ(c.surviving_pairs(), 12u);
    EXPECT_EQ(c.alice_capacity_bits(), 20u);
    EXPECT_EQ(c.bob_capacity_bits(), 24u);
    EXPECT_EQ(make_config(64, 4.0 / 64, 0, 0).first_check_count(), 4u);
    EXPECT_EQ(make_config(10, 0.01, 0, 0).first_check_count(), 1u);
    EXPECT_NO_THROW(c.validate());
}

TEST(session, config_validation) {
    EXPECT_THROW(make_config(0, 0.5, 0, 0).validate(), ConfigInvalid);
    EXPECT_THROW(make_config(8, 0.0, 0, 0).validate(), ConfigInvalid);
    EXPECT_THROW(make_config(8, 1.0, 0, 0).validate(), ConfigInvalid);
    EXPECT_THROW(make_config(2, 0.9, 0, 0).validate(), ConfigInvalid);
    EXPECT_THROW(make_config(8, 0.5, 4, 0).validate(), ConfigInvalid);
    EXPECT_NO_THROW(make_config(8, 0.5, 3, 0).validate());
    auto bad_eve = make_config(8, 0.5, 0, 0);
    bad_eve.eve.attack_probability = 2;
    EXPECT_THROW(bad_eve.validate(), ConfigInvalid);
    EXPECT_THROW(run_protocol(make_config(8, 1.0, 0, 0), {}, {}), ConfigInvalid);
}

TEST(session, capacity_exceeded) {
    auto c = make_config(8, 0.25, 2, 0);  // alice 8 bits, bob 12 bits
    EXPECT_NO_THROW(run_protocol(c, zeros(8), zeros(12)));
    EXPECT_THROW(run_protocol(c, zeros(9), zeros(12)), CapacityExceeded);
    EXPECT_THROW(run_protocol(c, zeros(8), zeros(13)), CapacityExceeded);
}

TEST(session, round_trip_without_eve) {
    RandomStream rng(100);
    auto c = make_config(16, 0.25, 2, 7);
    auto alice = random_message(20, rng);
    auto bob = random_message(20, rng);
    auto t = run_protocol(c, alice, bob);
    ASSERT_TRUE(t.verdict.completed);
    EXPECT_EQ(t.verdict.phase, Phase::Done);
    EXPECT_EQ(t.verdict.bob_decoded, alice);
    EXPECT_EQ(t.verdict.alice_decoded, bob);
    ASSERT_TRUE(t.first_check);
    EXPECT_EQ(t.first_check->violations, 0u);
    EXPECT_EQ(t.first_check->checked, 4u);
    ASSERT_TRUE(t.second_check);
    EXPECT_TRUE(t.second_check->passed);
    EXPECT_EQ(t.second_check->checked, 2u);
}

TEST(session, empty_messages) {
    auto t = run_protocol(make_config(4, 0.25, 0, 1), {}, {});
    ASSERT_TRUE(t.verdict.completed);
    EXPECT_TRUE(t.verdict.alice_decoded.empty());
    EXPECT_TRUE(t.verdict.bob_decoded.empty());
}

TEST(session, odd_length_messages) {
    auto alice = *MessageBits::parse("10110");
    auto bob = *MessageBits::parse("1");
    auto t = run_protocol(make_config(8, 0.25, 1, 3), alice, bob);
    ASSERT_TRUE(t.verdict.completed);
    EXPECT_EQ(t.verdict.bob_decoded.payload_str(), "10110");
    EXPECT_EQ(t.verdict.alice_decoded.payload_str(), "1");
}

TEST(session, end_to_end_fidelity_property) {
    RandomStream rng(101);
    for (int trial = 0; trial < 200; trial++) {
        size_t n = 2 + rng.below(60);
        double fraction = 0.05 + 0.6 * rng.uniform();
        auto c = make_config(n, fraction, 0, rng.next_u64());
        if (c.first_check_count() >= n) continue;
        c.check_count_2 = rng.below(c.surviving_pairs());
        auto alice = random_message(rng.below(c.alice_capacity_bits() + 1), rng);
        auto bob = random_message(rng.below(c.bob_capacity_bits() + 1), rng);
        if (alice.size() > c.alice_capacity_bits() || bob.size() > c.bob_capacity_bits()) continue;
        auto t = run_protocol(c, alice, bob);
        ASSERT_TRUE(t.verdict.completed) << c.canonical();
        ASSERT_EQ(t.verdict.bob_decoded.payload(), alice.payload()) << c.canonical();
        ASSERT_EQ(t.verdict.alice_decoded.payload(), bob.payload()) << c.canonical();
    }
}

TEST(session, thousand_pair_run) {
    RandomStream rng(102);
    auto c = make_config(1000, 0.1, 20, 99);
    auto alice = random_message(c.alice_capacity_bits(), rng);
    auto bob = random_message(c.bob_capacity_bits(), rng);
    auto t = run_protocol(c, alice, bob);
    ASSERT_TRUE(t.verdict.completed);
    EXPECT_EQ(t.verdict.bob_decoded, alice);
    EXPECT_EQ(t.verdict.alice_decoded, bob);
}

TEST(session, first_check_aborts_on_violation) {
    // With 32 check photons under intercept-resend the check fails with
    // probability 1 - (3/4)^32 > 0.9998.
    auto c = make_config(64, 0.5, 0, 5, EveStrategy::make(EveKind::InterceptResendZ));
    auto t = run_protocol(c, {}, {});
    ASSERT_FALSE(t.verdict.completed);
    EXPECT_EQ(t.verdict.phase, Phase::FirstCheck);
    EXPECT_EQ(t.verdict.reason, "first_check_failed");
    ASSERT_TRUE(t.first_check);
    EXPECT_GT(t.first_check->violations, 0u);
    EXPECT_FALSE(t.second_check);
    EXPECT_EQ(t.events.back().kind, "verdict");
    EXPECT_EQ(t.events[t.events.size() - 2].kind, "msg.abort");

    // A tolerant threshold lets the same run continue.
    c.abort_threshold = 64;
    auto tolerant = run_protocol(c, {}, {});
    EXPECT_TRUE(tolerant.first_check->passed);
    EXPECT_TRUE(tolerant.verdict.completed);
}

TEST(session, first_check_without_eve_never_violates) {
    for (uint64_t seed = 0; seed < 100; seed++) {
        auto t = run_protocol(make_config(32, 0.5, 0, seed), {}, {});
        ASSERT_EQ(t.first_check->violations, 0u);
        ASSERT_TRUE(t.first_check->passed);
    }
}

TEST(session, alice_encodes_bits_on_m_photons) {
    // Alice's first message pair "10" lands on the first surviving index as U2.
    auto c = make_config(8, 0.25, 0, 11);
    auto t = run_protocol(c, *MessageBits::parse("10"), {});
    size_t first_surviving = 0;
    while (t.pairs[first_surviving].use == PairUse::FirstCheck) first_surviving++;
    const Event *e = find_event(t, Actor::Alice, "encode", first_surviving);
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->payload["op"], "U2");
    EXPECT_EQ(e->payload["slot"], "M");
    EXPECT_EQ(e->payload["purpose"], "message");
}

TEST(session, decoy_positions_partition_surviving_pairs) {
    RandomStream rng(103);
    for (int trial = 0; trial < 100; trial++) {
        auto c = make_config(40, 0.25, rng.below(30), rng.next_u64());
        auto t = run_protocol(c, {}, {});
        size_t checked = 0, message = 0, decoy = 0;
        for (const auto &p : t.pairs) {
            ASSERT_TRUE(p.use.has_value());
            if (*p.use == PairUse::FirstCheck) {
                checked++;
                EXPECT_FALSE(p.alice_op);
            } else {
                (*p.use == PairUse::Decoy ? decoy : message)++;
                EXPECT_TRUE(p.alice_op);
                EXPECT_TRUE(p.bob_op);
                EXPECT_TRUE(p.announced);
            }
        }
        EXPECT_EQ(checked, c.first_check_count());
        EXPECT_EQ(decoy, c.check_count_2);
        EXPECT_EQ(message + decoy, c.surviving_pairs());
    }
}

TEST(session, bob_identity_announces_alice_states) {
    RandomStream rng(104);
    auto c = make_config(32, 0.25, 3, 12);
    auto alice = random_message(c.alice_capacity_bits(), rng);
    auto t = run_protocol(c, alice, zeros(c.bob_capacity_bits()));
    for (const auto &p : t.pairs) {
        if (p.use == PairUse::FirstCheck) continue;
        EXPECT_EQ(*p.bob_op, PauliOp::U0);
        EXPECT_EQ(*p.announced, bell_from_index(code(*p.alice_op)));
    }
    EXPECT_EQ(t.verdict.bob_decoded, alice);
}

TEST(session, every_pair_matches_table_on_either_slot) {
    std::array<int, 2> slots{};
    for (uint64_t seed = 0; seed < 50; seed++) {
        RandomStream rng(seed);
        auto c = make_config(32, 0.25, 4, seed);
        auto t = run_protocol(c, random_message(c.alice_capacity_bits(), rng), random_message(c.bob_capacity_bits(), rng));
        for (const auto &p : t.pairs) {
            if (p.use == PairUse::FirstCheck) continue;
            slots[static_cast<size_t>(*p.bob_slot)]++;
            ASSERT_EQ(*p.announced, expected_bell(*p.alice_op, *p.bob_op));
        }
    }
    // Bob's slot choice is a fair coin.
    double n = slots[0] + slots[1];
    EXPECT_NEAR(slots[0], n / 2, 3 * std::sqrt(n / 4));
}

TEST(session, second_check_detects_substitution) {
    auto sub = EveStrategy::make(EveKind::SubstituteFresh);
    uint64_t aborted = 0;
    for (uint64_t seed = 0; seed < 50; seed++) {
        auto t = run_protocol(make_config(32, 0.25, 8, seed, sub), {}, {});
        EXPECT_TRUE(t.first_check->passed);
        if (!t.verdict.completed) {
            EXPECT_EQ(t.verdict.phase, Phase::SecondCheck);
            EXPECT_EQ(t.verdict.reason, "second_check_failed");
            aborted++;
        }
    }
    // Miss probability per run is (1/4)^8.
    EXPECT_GE(aborted, 49u);

    // Zero decoys: vacuous pass even under attack.
    auto t = run_protocol(make_config(32, 0.25, 0, 1, sub), {}, {});
    EXPECT_TRUE(t.verdict.completed);
    EXPECT_EQ(t.second_check->checked, 0u);
    EXPECT_TRUE(t.second_check->passed);
}

TEST(session, decode_is_per_pair_independent) {
    RandomStream rng(105);
    auto c = make_config(64, 0.25, 6, 21);
    auto alice = random_message(c.alice_capacity_bits(), rng);
    auto bob = random_message(c.bob_capacity_bits(), rng);
    auto t = run_protocol(c, alice, bob);
    std::vector<size_t> order;
    for (size_t i = 0; i < t.pairs.size(); i++) {
        if (t.pairs[i].use != PairUse::FirstCheck) order.push_back(i);
    }
    // Decode pairs in a shuffled order, then reassemble by index.
    auto shuffled = order;
    for (size_t k = shuffled.size(); k > 1; k--) {
        std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
    }
    std::vector<std::optional<BitPair>> for_bob(t.pairs.size()), for_alice(t.pairs.size());
    for (auto i : shuffled) {
        const auto &p = t.pairs[i];
        for_alice[i] = decode_bob(*p.alice_op, *p.announced);
        if (p.use == PairUse::Message) for_bob[i] = decode_alice(*p.bob_op, *p.announced);
    }
    std::vector<BitPair> bob_got, alice_got;
    for (auto i : order) {
        alice_got.push_back(*for_alice[i]);
        if (for_bob[i]) bob_got.push_back(*for_bob[i]);
    }
    EXPECT_EQ(MessageBits::from_pairs(bob_got, 0).with_payload_size(alice.payload_size()).stripped(), alice);
    EXPECT_EQ(MessageBits::from_pairs(alice_got, 0).with_payload_size(bob.payload_size()).stripped(), bob);
}

TEST(session, replay_is_byte_identical) {
    RandomStream rng(106);
    for (auto eve : {EveStrategy{}, EveStrategy::make(EveKind::InterceptResendRandom, 0.3),
                     EveStrategy::make(EveKind::SubstituteFresh)}) {
        auto c = make_config(24, 0.25, 3, rng.next_u64(), eve);
        auto alice = random_message(c.alice_capacity_bits(), rng);
        auto bob = random_message(11, rng);
        auto a = run_protocol(c, alice, bob);
        auto b = run_protocol(c, alice, bob);
        EXPECT_EQ(a.to_jsonl(), b.to_jsonl());
        EXPECT_EQ(a, b);
        EXPECT_EQ(replay(a).to_jsonl(), a.to_jsonl());
        c.seed++;
        EXPECT_NE(run_protocol(c, alice, bob).to_jsonl(), a.to_jsonl());
    }
}

TEST(session, custody_audit_is_clean) {
    RandomStream rng(107);
    for (auto eve : {EveStrategy{}, EveStrategy::make(EveKind::InterceptResendZ),
                     EveStrategy::make(EveKind::SubstituteFresh)}) {
        for (int trial = 0; trial < 20; trial++) {
            auto c = make_config(20, 0.2, 2, rng.next_u64(), eve);
            auto t = run_protocol(c, {}, {});
            auto problems = audit_custody(t.events);
            EXPECT_TRUE(problems.empty()) << problems.front();
        }
    }
}

TEST(session, register_enforces_custody) {
    EventLog log;
    QuantumRegister reg(2, log, RandomStream(1));
    reg.prepare(Actor::Alice);
    EXPECT_EQ(reg.holder(0, QubitSlot::C), Actor::Alice);
    EXPECT_THROW(reg.measure(Actor::Bob, 0, QubitSlot::C, Basis::Z), std::logic_error);
    EXPECT_THROW(reg.apply(Actor::Bob, 1, QubitSlot::M, PauliOp::U1), std::logic_error);
    std::vector<size_t> idx{0, 1};
    RandomStream eve(2);
    reg.transmit(Actor::Alice, Actor::Bob, idx, Leg::First, EveStrategy{}, eve);
    EXPECT_EQ(reg.holder(1, QubitSlot::C), Actor::Bob);
    EXPECT_EQ(reg.holder(1, QubitSlot::M), Actor::Alice);
    EXPECT_THROW(reg.bell_measure(Actor::Bob, 0), std::logic_error);
    reg.measure(Actor::Bob, 0, QubitSlot::C, Basis::X);
    EXPECT_FALSE(reg.holder(0, QubitSlot::C));
    EXPECT_THROW(reg.measure(Actor::Bob, 0, QubitSlot::C, Basis::X), std::logic_error);
}

TEST(session, phase_order_is_enforced) {
    auto c = make_config(8, 0.25, 0, 1);
    EventLog log;
    QuantumRegister reg(8, log, RandomStream(1));
    Alice alice(c, {}, 0, RandomStream(2));
    EXPECT_EQ(alice.phase(), Phase::Init);
    alice.prepare(reg);
    EXPECT_THROW(alice.encode(reg), std::logic_error);
    alice.send_c_photons();
    EXPECT_EQ(alice.phase(), Phase::FirstTransmission);
    EXPECT_THROW(alice.send_m_photons(), std::logic_error);
    alice.abort();
    EXPECT_EQ(alice.phase(), Phase::Aborted);
    EXPECT_THROW(alice.abort(), std::logic_error);

    EXPECT_TRUE(is_valid_transition(Phase::BellAnnounce, Phase::SecondCheck));
    EXPECT_FALSE(is_valid_transition(Phase::SecondCheck, Phase::BellAnnounce));
    EXPECT_FALSE(is_valid_transition(Phase::Init, Phase::FirstCheck));
    EXPECT_FALSE(is_valid_transition(Phase::Done, Phase::Aborted));
}

TEST(session, announced_results_do_not_reveal_ops) {
    // For each announced Bell state, all four consistent (alice, bob) op
    // pairs occur equally often under uniform messages.
    std::array<std::array<uint64_t, 4>, 4> counts{};  // [announced][alice op]
    RandomStream rng(108);
    for (int run = 0; run < 300; run++) {
        auto c = make_config(64, 0.25, 4, rng.next_u64());
        auto t = run_protocol(c, random_message(c.alice_capacity_bits(), rng), random_message(c.bob_capacity_bits(), rng));
        for (const auto &p : t.pairs) {
            if (p.use != PairUse::Message) continue;
            ASSERT_EQ(code(*p.bob_op), index(*p.announced) ^ code(*p.alice_op));
            counts[index(*p.announced)][code(*p.alice_op)]++;
        }
    }
    for (const auto &row : counts) {
        double total = 0;
        for (auto v : row) total += static_cast<double>(v);
        double chi2 = 0;
        for (auto v : row) chi2 += std::pow(static_cast<double>(v) - total / 4, 2) / (total / 4);
        // 3 degrees of freedom; 16.27 is the 0.999 quantile.
        EXPECT_LT(chi2, 16.27);
    }
}

TEST(session, abort_rate_grows_with_check_size) {
    auto z = EveStrategy::make(EveKind::InterceptResendZ);
    double previous = -1;
    for (size_t c : {1, 2, 4, 8}) {
        RandomStream rng(200 + c);
        auto stats = estimate_detection(z, make_config(32, static_cast<double>(c) / 32, 0, 0), 3000, rng);
        double expected = 1 - std::pow(0.75, static_cast<double>(c));
        EXPECT_TRUE(within_binomial_band(stats.whole_protocol_abort.successes, 3000, expected))
            << c << ": " << stats.whole_protocol_abort.rate << " vs " << expected;
        EXPECT_GT(stats.whole_protocol_abort.rate, previous);
        previous = stats.whole_protocol_abort.rate;
    }
}
