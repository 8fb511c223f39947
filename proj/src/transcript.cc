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

#include "bdc/transcript.h"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace bdc {

namespace {

template <typename T, typename F>
Json names_of(const std::vector<T> &values, F &&to_name) {
    Json arr = Json::array();
    for (const auto &v : values) {
        arr.push_back(std::string(to_name(v)));
    }
    return arr;
}

template <typename T, typename Parse>
std::vector<T> parse_names(const Json &arr, Parse &&parse, std::string_view what) {
    std::vector<T> out;
    for (const auto &v : arr) {
        auto parsed = parse(v.get<std::string>());
        if (!parsed) {
            throw TranscriptFormatError(fmt::format("unknown {} '{}'", what, v.get<std::string>()));
        }
        out.push_back(*parsed);
    }
    return out;
}

template <typename T>
T require(std::optional<T> value, std::string_view what, const Json &source) {
    if (!value) {
        throw TranscriptFormatError(fmt::format("unknown {} {}", what, source.dump()));
    }
    return *value;
}

std::string_view check_name(CheckKind k) {
    return k == CheckKind::First ? "first" : "second";
}

}  // namespace

std::string_view message_kind(const ClassicalMessage &message) {
    constexpr std::array<std::string_view, 8> kinds{
        "msg.check_indices",        "msg.basis_announce",        "msg.outcome_announce",
        "msg.check_verdict",        "msg.second_check_indices",  "msg.second_check_reveal",
        "msg.bell_results",         "msg.abort"};
    return kinds[message.index()];
}

Json message_payload(const ClassicalMessage &message) {
    return std::visit(
        [](const auto &m) -> Json {
            using M = std::decay_t<decltype(m)>;
            Json j = Json::object();
            if constexpr (std::is_same_v<M, CheckIndices> || std::is_same_v<M, SecondCheckIndices>) {
                j["indices"] = m.indices;
            } else if constexpr (std::is_same_v<M, BasisAnnounce>) {
                j["indices"] = m.indices;
                j["bases"] = names_of(m.bases, [](Basis b) { return name(b); });
            } else if constexpr (std::is_same_v<M, OutcomeAnnounce>) {
                j["indices"] = m.indices;
                j["outcomes"] = m.outcomes;
            } else if constexpr (std::is_same_v<M, CheckVerdict>) {
                j["check"] = check_name(m.check);
                j["passed"] = m.passed;
                j["violations"] = m.violations;
                j["checked"] = m.checked;
            } else if constexpr (std::is_same_v<M, SecondCheckReveal>) {
                j["indices"] = m.indices;
                j["ops"] = names_of(m.ops, [](PauliOp op) { return name(op); });
            } else if constexpr (std::is_same_v<M, BellResults>) {
                j["indices"] = m.indices;
                j["results"] = names_of(m.results, [](BellState b) { return name(b); });
            } else if constexpr (std::is_same_v<M, Abort>) {
                j["reason"] = m.reason;
            }
            return j;
        },
        message);
}

std::optional<ClassicalMessage> message_from_event(const Event &event) {
    const auto &p = event.payload;
    const auto &k = event.kind;
    try {
        if (k == "msg.check_indices") {
            return CheckIndices{p.at("indices").get<std::vector<size_t>>()};
        }
        if (k == "msg.basis_announce") {
            return BasisAnnounce{
                p.at("indices").get<std::vector<size_t>>(), parse_names<Basis>(p.at("bases"), parse_basis, "basis")};
        }
        if (k == "msg.outcome_announce") {
            return OutcomeAnnounce{p.at("indices").get<std::vector<size_t>>(), p.at("outcomes").get<std::vector<uint8_t>>()};
        }
        if (k == "msg.check_verdict") {
            auto check = p.at("check").get<std::string>();
            if (check != "first" && check != "second") {
                throw TranscriptFormatError("unknown check '" + check + "'");
            }
            return CheckVerdict{
                check == "first" ? CheckKind::First : CheckKind::Second, p.at("passed").get<bool>(),
                p.at("violations").get<size_t>(), p.at("checked").get<size_t>()};
        }
        if (k == "msg.second_check_indices") {
            return SecondCheckIndices{p.at("indices").get<std::vector<size_t>>()};
        }
        if (k == "msg.second_check_reveal") {
            return SecondCheckReveal{
                p.at("indices").get<std::vector<size_t>>(), parse_names<PauliOp>(p.at("ops"), parse_pauli, "op")};
        }
        if (k == "msg.bell_results") {
            return BellResults{
                p.at("indices").get<std::vector<size_t>>(),
                parse_names<BellState>(p.at("results"), parse_bell, "Bell state")};
        }
        if (k == "msg.abort") {
            return Abort{p.at("reason").get<std::string>()};
        }
    } catch (const Json::exception &e) {
        throw TranscriptFormatError(fmt::format("malformed {} payload: {}", k, e.what()));
    }
    if (k.starts_with(MESSAGE_KIND_PREFIX)) {
        throw TranscriptFormatError("unknown message kind '" + k + "'");
    }
    return std::nullopt;
}

const Event &EventLog::emit(Actor actor, std::string kind, Json payload) {
    events_.push_back(Event{events_.size(), actor, std::move(kind), std::move(payload)});
    return events_.back();
}

const Event &EventLog::post(Actor actor, const ClassicalMessage &message) {
    return emit(actor, std::string(message_kind(message)), message_payload(message));
}

std::string_view name(PairUse use) {
    switch (use) {
        case PairUse::FirstCheck:
            return "first_check";
        case PairUse::Message:
            return "message";
        case PairUse::Decoy:
            return "decoy";
    }
    throw std::logic_error("unknown PairUse");
}

Json config_to_json(const ProtocolConfig &config) {
    Json eve = Json::object();
    eve["kind"] = name(config.eve.kind);
    eve["attack_probability"] = config.eve.attack_probability;
    eve["legs"] = name(config.eve.legs);
    Json j = Json::object();
    j["n_pairs"] = config.n_pairs;
    j["check_fraction_1"] = config.check_fraction_1;
    j["check_count_2"] = config.check_count_2;
    j["abort_threshold"] = config.abort_threshold;
    j["seed"] = config.seed;
    j["eve"] = eve;
    return j;
}

ProtocolConfig config_from_json(const Json &j) {
    ProtocolConfig c;
    c.n_pairs = j.at("n_pairs").get<size_t>();
    c.check_fraction_1 = j.at("check_fraction_1").get<double>();
    c.check_count_2 = j.at("check_count_2").get<size_t>();
    c.abort_threshold = j.at("abort_threshold").get<size_t>();
    c.seed = j.at("seed").get<uint64_t>();
    const auto &eve = j.at("eve");
    c.eve.kind = require(parse_eve_kind(eve.at("kind").get<std::string>()), "eve kind", eve);
    c.eve.attack_probability = eve.at("attack_probability").get<double>();
    c.eve.legs = require(parse_leg_selection(eve.at("legs").get<std::string>()), "eve legs", eve);
    return c;
}

std::string event_to_line(const Event &event) {
    Json j = Json::object();
    j["seq"] = event.seq;
    j["actor"] = name(event.actor);
    j["kind"] = event.kind;
    j["payload"] = event.payload;
    return j.dump();
}

Event event_from_line(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::exception &e) {
        throw TranscriptFormatError(fmt::format("invalid JSON line: {}", e.what()));
    }
    if (!j.is_object()) {
        throw TranscriptFormatError("transcript line is not an object");
    }
    try {
        Event e;
        e.seq = j.at("seq").get<uint64_t>();
        e.actor = require(parse_actor(j.at("actor").get<std::string>()), "actor", j);
        e.kind = j.at("kind").get<std::string>();
        e.payload = j.at("payload");
        return e;
    } catch (const Json::exception &ex) {
        throw TranscriptFormatError(fmt::format("missing or mistyped event field: {}", ex.what()));
    }
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const auto &e : events) {
        out += event_to_line(e);
        out += '\n';
    }
    return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
    std::vector<Event> events;
    size_t start = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        if (!line.empty()) {
            events.push_back(event_from_line(line));
        }
        start = end + 1;
    }
    return from_events(std::move(events));
}

Transcript Transcript::from_events(std::vector<Event> events) {
    for (size_t k = 0; k < events.size(); k++) {
        if (events[k].seq != k) {
            throw TranscriptFormatError(
                fmt::format("sequence numbers must be dense from 0: line {} has seq {}", k, events[k].seq));
        }
    }
    if (events.empty() || events.front().kind != "config") {
        throw TranscriptFormatError("transcript must start with a config event");
    }

    Transcript t;
    try {
        const auto &head = events.front().payload;
        t.config = config_from_json(head.at("config"));
        auto alice = MessageBits::parse(head.at("alice_msg").get<std::string>());
        auto bob = MessageBits::parse(head.at("bob_msg").get<std::string>());
        if (!alice || !bob) {
            throw TranscriptFormatError("config messages must be bit strings");
        }
        t.alice_msg = *alice;
        t.bob_msg = *bob;
        t.pairs.resize(t.config.n_pairs);
        auto pair_at = [&](const Json &p) -> PairLedger & {
            size_t i = p.at("index").get<size_t>();
            if (i >= t.pairs.size()) {
                throw TranscriptFormatError(fmt::format("pair index {} out of range", i));
            }
            return t.pairs[i];
        };

        bool saw_verdict = false;
        for (const auto &e : events) {
            const auto &p = e.payload;
            if (auto msg = message_from_event(e)) {
                if (auto *ci = std::get_if<CheckIndices>(&*msg)) {
                    for (auto i : ci->indices) {
                        if (i >= t.pairs.size()) {
                            throw TranscriptFormatError("check index out of range");
                        }
                        t.pairs[i].use = PairUse::FirstCheck;
                    }
                } else if (auto *v = std::get_if<CheckVerdict>(&*msg)) {
                    (v->check == CheckKind::First ? t.first_check : t.second_check) = *v;
                } else if (auto *br = std::get_if<BellResults>(&*msg)) {
                    for (size_t k = 0; k < br->indices.size(); k++) {
                        t.eve.guesses.push_back(guess_from_announcement(br->indices[k], br->results[k]));
                    }
                }
            } else if (e.kind == "encode") {
                auto &ledger = pair_at(p);
                auto op = require(parse_pauli(p.at("op").get<std::string>()), "op", p);
                if (e.actor == Actor::Alice) {
                    ledger.alice_op = op;
                    ledger.use = p.at("purpose").get<std::string>() == "decoy" ? PairUse::Decoy : PairUse::Message;
                } else {
                    ledger.bob_op = op;
                    ledger.bob_slot = require(parse_slot(p.at("slot").get<std::string>()), "slot", p);
                }
            } else if (e.kind == "bell_measure") {
                pair_at(p).announced = require(parse_bell(p.at("result").get<std::string>()), "Bell state", p);
            } else if (e.kind == "eve_attack") {
                t.eve.observations.push_back(EveObservation{
                    p.at("index").get<size_t>(),
                    require(parse_leg(p.at("leg").get<std::string>()), "leg", p),
                    require(parse_basis(p.at("basis").get<std::string>()), "basis", p),
                    p.at("outcome").get<uint8_t>(),
                    p.at("action").get<std::string>() == "substitute",
                });
            } else if (e.kind == "verdict") {
                saw_verdict = true;
                auto status = p.at("status").get<std::string>();
                if (status == "completed") {
                    auto a = MessageBits::parse(p.at("alice_decoded").get<std::string>());
                    auto b = MessageBits::parse(p.at("bob_decoded").get<std::string>());
                    if (!a || !b) {
                        throw TranscriptFormatError("decoded messages must be bit strings");
                    }
                    t.verdict.completed = true;
                    t.verdict.alice_decoded = *a;
                    t.verdict.bob_decoded = *b;
                    t.verdict.phase = Phase::Done;
                } else if (status == "aborted") {
                    t.verdict.completed = false;
                    t.verdict.phase = require(parse_phase(p.at("phase").get<std::string>()), "phase", p);
                    t.verdict.reason = p.at("reason").get<std::string>();
                } else {
                    throw TranscriptFormatError("unknown verdict status '" + status + "'");
                }
            }
        }
        if (!saw_verdict) {
            throw TranscriptFormatError("transcript has no verdict event");
        }
    } catch (const Json::exception &e) {
        throw TranscriptFormatError(fmt::format("malformed event payload: {}", e.what()));
    } catch (const std::invalid_argument &e) {
        throw TranscriptFormatError(e.what());
    }
    t.events = std::move(events);
    return t;
}

void Transcript::write(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open transcript for writing: " + path.string());
    }
    out << to_jsonl();
    if (!out) {
        throw std::runtime_error("failed writing transcript: " + path.string());
    }
}

Transcript Transcript::read(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open transcript: " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_jsonl(buf.str());
}

std::vector<std::string> audit_custody(std::span<const Event> events) {
    enum class Holder { Nobody, Alice, Bob, Channel, Consumed };
    auto holder_name = [](Holder h) -> std::string_view {
        constexpr std::array<std::string_view, 5> n{"nobody", "alice", "bob", "channel", "consumed"};
        return n[static_cast<size_t>(h)];
    };
    auto as_holder = [](Actor a) {
        return a == Actor::Alice ? Holder::Alice : a == Actor::Bob ? Holder::Bob : Holder::Nobody;
    };

    std::vector<std::array<Holder, 2>> custody;
    std::vector<std::string> problems;
    auto slot_holder = [&](size_t i, QubitSlot s) -> Holder * {
        if (i >= custody.size()) {
            problems.push_back(fmt::format("pair {} was never prepared", i));
            return nullptr;
        }
        return &custody[i][static_cast<size_t>(s)];
    };
    auto expect = [&](const Event &e, size_t i, QubitSlot s, Holder want) -> Holder * {
        Holder *h = slot_holder(i, s);
        if (h != nullptr && *h != want) {
            problems.push_back(fmt::format(
                "seq {}: {} {} on pair {} photon {} held by {}", e.seq, name(e.actor), e.kind, i, name(s),
                holder_name(*h)));
            return nullptr;
        }
        return h;
    };

    for (const auto &e : events) {
        const auto &p = e.payload;
        try {
            if (e.kind == "prepare") {
                custody.assign(p.at("pairs").get<size_t>(), {as_holder(e.actor), as_holder(e.actor)});
            } else if (e.kind == "send" || e.kind == "receive") {
                auto slot = require(parse_slot(p.at("slot").get<std::string>()), "slot", p);
                bool sending = e.kind == "send";
                for (auto i : p.at("indices").get<std::vector<size_t>>()) {
                    if (auto *h = expect(e, i, slot, sending ? as_holder(e.actor) : Holder::Channel)) {
                        *h = sending ? Holder::Channel : as_holder(e.actor);
                    }
                }
            } else if (e.kind == "eve_attack") {
                auto slot = require(parse_slot(p.at("slot").get<std::string>()), "slot", p);
                expect(e, p.at("index").get<size_t>(), slot, Holder::Channel);
            } else if (e.kind == "measure") {
                auto slot = require(parse_slot(p.at("slot").get<std::string>()), "slot", p);
                if (auto *h = expect(e, p.at("index").get<size_t>(), slot, as_holder(e.actor))) {
                    *h = Holder::Consumed;
                }
            } else if (e.kind == "encode") {
                auto slot = require(parse_slot(p.at("slot").get<std::string>()), "slot", p);
                expect(e, p.at("index").get<size_t>(), slot, as_holder(e.actor));
            } else if (e.kind == "bell_measure") {
                size_t i = p.at("index").get<size_t>();
                auto *c = expect(e, i, QubitSlot::C, as_holder(e.actor));
                auto *m = expect(e, i, QubitSlot::M, as_holder(e.actor));
                if (c != nullptr && m != nullptr) {
                    *c = Holder::Consumed;
                    *m = Holder::Consumed;
                }
            }
        } catch (const Json::exception &ex) {
            problems.push_back(fmt::format("seq {}: malformed {} payload: {}", e.seq, e.kind, ex.what()));
        } catch (const TranscriptFormatError &ex) {
            problems.push_back(fmt::format("seq {}: {}", e.seq, ex.what()));
        }
    }
    return problems;
}

}  // namespace bdc
