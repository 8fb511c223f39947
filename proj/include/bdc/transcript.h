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

#ifndef BDC_TRANSCRIPT_H
#define BDC_TRANSCRIPT_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bdc/adversary.h"
#include "bdc/codec.h"
#include "bdc/protocol.h"

namespace bdc {

using Json = nlohmann::ordered_json;

struct TranscriptFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One line of a transcript file.
struct Event {
    uint64_t seq = 0;
    Actor actor = Actor::System;
    std::string kind;
    Json payload;

    bool operator==(const Event &) const = default;
};

/// Prefix shared by all public-channel event kinds.
constexpr std::string_view MESSAGE_KIND_PREFIX = "msg.";

std::string_view message_kind(const ClassicalMessage &message);
Json message_payload(const ClassicalMessage &message);
/// Decodes a public-channel event; nullopt for local and quantum events.
std::optional<ClassicalMessage> message_from_event(const Event &event);

/// Append-only event sink. Sequence numbers are dense from 0.
class EventLog {
   public:
    const Event &emit(Actor actor, std::string kind, Json payload);
    const Event &post(Actor actor, const ClassicalMessage &message);

    const std::vector<Event> &events() const {
        return events_;
    }
    std::vector<Event> take() {
        return std::move(events_);
    }

   private:
    std::vector<Event> events_;
};

enum class PairUse : uint8_t { FirstCheck, Message, Decoy };

std::string_view name(PairUse use);

/// Everything that happened to one EPR pair, gathered from the event log.
struct PairLedger {
    std::optional<PairUse> use;
    std::optional<PauliOp> alice_op;
    std::optional<PauliOp> bob_op;
    std::optional<QubitSlot> bob_slot;
    std::optional<BellState> announced;

    bool operator==(const PairLedger &) const = default;
};

struct Verdict {
    bool completed = false;
    /// Bob's bits as decoded by Alice (padding stripped).
    MessageBits alice_decoded;
    /// Alice's bits as decoded by Bob (padding stripped).
    MessageBits bob_decoded;
    /// Phase in which the run aborted.
    Phase phase = Phase::Init;
    std::string reason;

    bool operator==(const Verdict &) const = default;
};

/// Full record of one protocol run.
///
/// The serialized form is the event log, one JSON object per line. All
/// other fields are derived from it, so to_jsonl/from_jsonl round-trip the
/// whole structure.
struct Transcript {
    ProtocolConfig config;
    MessageBits alice_msg;
    MessageBits bob_msg;
    std::vector<Event> events;
    Verdict verdict;
    std::optional<CheckVerdict> first_check;
    std::optional<CheckVerdict> second_check;
    std::vector<PairLedger> pairs;
    EveRecord eve;

    std::string to_jsonl() const;

    /// Throws TranscriptFormatError on malformed input, including sequence
    /// numbers that are not dense from 0.
    static Transcript from_jsonl(std::string_view text);
    static Transcript from_events(std::vector<Event> events);

    void write(const std::filesystem::path &path) const;
    static Transcript read(const std::filesystem::path &path);

    bool operator==(const Transcript &) const = default;
};

std::string event_to_line(const Event &event);
Event event_from_line(std::string_view line);

Json config_to_json(const ProtocolConfig &config);
ProtocolConfig config_from_json(const Json &j);

/// Replays photon custody through the log and reports every operation by
/// an actor that did not hold the photon at that point. Empty means clean.
std::vector<std::string> audit_custody(std::span<const Event> events);

}  // namespace bdc

#endif
