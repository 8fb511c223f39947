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

#include "bdc/cli.h"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "bdc/codec.h"
#include "bdc/detection.h"
#include "bdc/qsim.h"
#include "bdc/session.h"
#include "bdc/transcript.h"

namespace bdc {

namespace {

constexpr std::string_view TOOL_VERSION = BDC_VERSION;
constexpr uint64_t ALICE_MESSAGE_STREAM = 100;
constexpr uint64_t BOB_MESSAGE_STREAM = 101;
constexpr uint64_t TRIAL_STREAM = 102;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    std::string command;
    std::string mode;
    ProtocolConfig config;
    std::string eve = "none";
    std::string eve_legs;
    uint64_t trials = 0;
    uint64_t min_runs = 1;
    std::string alice_msg;
    std::string bob_msg;
    std::string out;
    std::string transcript;
};

std::string config_hash_hex(const ProtocolConfig &c) {
    return fmt::format("{:016x}", c.hash());
}

std::string fixed(double v) {
    return fmt::format("{:.8f}", v);
}

void check_writable(const std::string &path) {
    if (path.empty()) {
        return;
    }
    std::ofstream probe(path, std::ios::app);
    if (!probe) {
        throw UsageError("cannot write to " + path);
    }
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw UsageError("cannot write to " + path);
    }
    f << content;
}

/// Resolves a message source: hex string, `file:<path>`, `random` (fills the
/// capacity) or `random:<bits>`.
MessageBits resolve_message(const std::string &source, size_t capacity_bits, RandomStream rng) {
    if (source.empty() || source == "random") {
        return random_message(capacity_bits, rng);
    }
    if (source.starts_with("random:")) {
        size_t bits = 0;
        try {
            bits = std::stoull(source.substr(7));
        } catch (const std::exception &) {
            throw UsageError("malformed random message length: " + source);
        }
        return random_message(bits, rng);
    }
    if (source.starts_with("file:")) {
        std::ifstream in(source.substr(5), std::ios::binary);
        if (!in) {
            throw UsageError("cannot read message file " + source.substr(5));
        }
        std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return pack_bits(bytes);
    }
    auto bytes = parse_hex(source);
    if (!bytes) {
        throw UsageError("malformed hex message: " + source);
    }
    return pack_bits(*bytes);
}

std::string render_message(const MessageBits &m) {
    if (m.payload_size() % 8 == 0) {
        return to_hex(unpack_bits(m));
    }
    return "bits:" + m.payload_str();
}

std::string metadata(const RunSpec &spec, std::string_view columns) {
    Json j = Json::object();
    j["tool"] = "bdc";
    j["version"] = TOOL_VERSION;
    j["mode"] = spec.mode;
    j["seed"] = spec.config.seed;
    j["config_hash"] = config_hash_hex(spec.config);
    j["config"] = config_to_json(spec.config);
    j["trials"] = spec.trials;
    Json cols = Json::array();
    std::string_view rest = columns;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        cols.push_back(std::string(rest.substr(0, comma)));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    j["columns"] = cols;
    return j.dump(2) + "\n";
}

void emit_csv(const RunSpec &spec, std::string_view header, const std::string &rows, std::ostream &out) {
    std::string csv = std::string(header) + "\n" + rows;
    if (spec.out.empty()) {
        out << csv;
        return;
    }
    write_file(spec.out, csv);
    write_file(spec.out + ".meta.json", metadata(spec, header));
}

std::string provenance(const RunSpec &spec) {
    return fmt::format("{},{},{}", spec.config.seed, config_hash_hex(spec.config), TOOL_VERSION);
}

// ---------------------------------------------------------------------------

constexpr std::string_view TABLE_CHECK_COLUMNS =
    "alice_op,alice_bits,bob_op,bob_bits,table_entry,simulated_slot_c,simulated_slot_m,match,seed,config_hash,version";

int run_table_check(const RunSpec &spec, std::ostream &out) {
    std::string rows;
    size_t matches = 0;
    out << fmt::format("{:<10}", "Alice\\Bob");
    for (auto b : ALL_PAULI_OPS) {
        out << fmt::format(" {:<10}", fmt::format("{}({})", name(b), bits_for_op(b).str()));
    }
    out << "\n";
    for (auto a : ALL_PAULI_OPS) {
        out << fmt::format("{:<10}", fmt::format("{}({})", name(a), bits_for_op(a).str()));
        for (auto b : ALL_PAULI_OPS) {
            BellState entry = expected_bell(a, b);
            std::array<std::string, 2> simulated;
            bool ok = true;
            for (auto slot : ALL_SLOTS) {
                auto state = apply_pauli(apply_pauli(make_singlet(), a, QubitSlot::M), b, slot);
                auto det = deterministic_bell(state);
                simulated[static_cast<size_t>(slot)] = det ? std::string(name(*det)) : "mixed";
                ok = ok && det == entry;
            }
            matches += ok;
            out << fmt::format(" {:<10}", name(entry));
            rows += fmt::format(
                "{},{},{},{},{},{},{},{},{}\n", name(a), bits_for_op(a).str(), name(b), bits_for_op(b).str(),
                name(entry), simulated[0], simulated[1], ok ? "true" : "false", provenance(spec));
        }
        out << "\n";
    }
    out << fmt::format("table-check: {}/16 entries match the simulated Bell measurement on both slots\n", matches);
    if (!spec.out.empty()) {
        emit_csv(spec, TABLE_CHECK_COLUMNS, rows, out);
    }
    return matches == 16 ? EXIT_OK : EXIT_FAILURE_GENERIC;
}

constexpr std::string_view ROUNDTRIP_COLUMNS =
    "pairs,eve,verdict,phase,reason,alice_msg,bob_msg,bob_decoded,alice_decoded,alice_ok,bob_ok,seed,config_hash,version";

int run_roundtrip(const RunSpec &spec, std::ostream &out) {
    const auto &c = spec.config;
    RandomStream root(c.seed);
    auto alice = resolve_message(spec.alice_msg, c.alice_capacity_bits(), root.split(ALICE_MESSAGE_STREAM));
    auto bob = resolve_message(spec.bob_msg, c.bob_capacity_bits(), root.split(BOB_MESSAGE_STREAM));
    Transcript t;
    try {
        t = run_protocol(c, alice, bob);
    } catch (const CapacityExceeded &e) {
        throw UsageError(e.what());
    }
    if (!spec.transcript.empty()) {
        t.write(spec.transcript);
    }
    const auto &v = t.verdict;
    bool alice_ok = v.completed && v.bob_decoded.payload() == alice.payload();
    bool bob_ok = v.completed && v.alice_decoded.payload() == bob.payload();
    out << fmt::format("seed={} config_hash={} version={}\n", c.seed, config_hash_hex(c), TOOL_VERSION);
    out << fmt::format("alice_msg={}\nbob_msg={}\n", render_message(alice), render_message(bob));
    if (v.completed) {
        out << fmt::format("verdict=completed\n");
        out << fmt::format("bob_decoded={}\nalice_decoded={}\n", render_message(v.bob_decoded),
                           render_message(v.alice_decoded));
    } else {
        out << fmt::format("verdict=aborted phase={} reason={}\n", name(v.phase), v.reason);
    }
    if (!spec.out.empty()) {
        std::string row = fmt::format(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n", c.n_pairs, name(c.eve.kind),
            v.completed ? "completed" : "aborted", name(v.phase), v.reason, alice.payload_str(), bob.payload_str(),
            v.completed ? v.bob_decoded.payload_str() : "", v.completed ? v.alice_decoded.payload_str() : "",
            alice_ok ? "true" : "false", bob_ok ? "true" : "false", provenance(spec));
        emit_csv(spec, ROUNDTRIP_COLUMNS, row, out);
    }
    if (!v.completed) {
        return EXIT_PROTOCOL_ABORT;
    }
    return alice_ok && bob_ok ? EXIT_OK : EXIT_FAILURE_GENERIC;
}

constexpr std::string_view SWEEP_COLUMNS =
    "eve,eve_prob,eve_legs,pairs,check_photons,decoys,trials,checked_photons,violations,per_photon_rate,"
    "per_photon_ci_low,per_photon_ci_high,analytic_per_photon_rate,aborts,first_check_aborts,second_check_aborts,"
    "abort_rate,abort_ci_low,abort_ci_high,analytic_first_check_abort_rate,decoys_checked,decoy_mismatches,"
    "per_decoy_rate,seed,config_hash,version";

int run_security_sweep(const RunSpec &spec, std::ostream &out) {
    const auto &c = spec.config;
    RandomStream rng = RandomStream(c.seed).split(TRIAL_STREAM);
    auto s = estimate_detection(c.eve, c, spec.trials, rng);
    std::string row = fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", name(c.eve.kind),
        fixed(c.eve.attack_probability), name(c.eve.legs), c.n_pairs, c.first_check_count(), c.check_count_2,
        spec.trials, s.per_photon.trials, s.per_photon.successes, fixed(s.per_photon.rate),
        fixed(s.per_photon.ci_low), fixed(s.per_photon.ci_high), fixed(analytic_violation_rate(c.eve)),
        s.whole_protocol_abort.successes, s.first_check_aborts, s.second_check_aborts,
        fixed(s.whole_protocol_abort.rate), fixed(s.whole_protocol_abort.ci_low),
        fixed(s.whole_protocol_abort.ci_high), fixed(analytic_first_check_abort_rate(c.eve, c.first_check_count())),
        s.per_decoy.trials, s.per_decoy.successes, fixed(s.per_decoy.rate), provenance(spec));
    emit_csv(spec, SWEEP_COLUMNS, row, out);
    return EXIT_OK;
}

constexpr std::string_view INFO_COLUMNS =
    "eve,eve_prob,eve_legs,pairs,trials,completed_runs,pairs_observed,alice_info_bits,bob_info_bits,seed,config_hash,"
    "version";

int run_info_estimate(const RunSpec &spec, std::ostream &out, std::ostream &err) {
    ProtocolConfig c = spec.config;
    RandomStream rng = RandomStream(c.seed).split(TRIAL_STREAM);
    InformationAccumulator acc;
    for (uint64_t t = 0; t < spec.trials; t++) {
        c.seed = rng.next_u64();
        RandomStream msg_rng = RandomStream(c.seed).split(0);
        auto alice = random_message(c.alice_capacity_bits(), msg_rng);
        auto bob = random_message(c.bob_capacity_bits(), msg_rng);
        acc.add(run_protocol(c, alice, bob));
    }
    InformationEstimate e;
    try {
        e = acc.estimate(spec.min_runs);
    } catch (const InsufficientSamples &ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_FAILURE_GENERIC;
    }
    const auto &sc = spec.config;
    std::string row = fmt::format(
        "{},{},{},{},{},{},{},{},{},{}\n", name(sc.eve.kind), fixed(sc.eve.attack_probability), name(sc.eve.legs),
        sc.n_pairs, spec.trials, e.runs, e.pairs, fixed(e.alice_bits), fixed(e.bob_bits), provenance(spec));
    emit_csv(spec, INFO_COLUMNS, row, out);
    return EXIT_OK;
}

int run_verify(const RunSpec &spec, std::ostream &out) {
    std::ifstream in(spec.transcript, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read transcript " + spec.transcript);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string original = buf.str();
    Transcript t;
    try {
        t = Transcript::from_jsonl(original);
    } catch (const TranscriptFormatError &e) {
        out << "format: FAIL " << e.what() << "\n";
        return EXIT_FAILURE_GENERIC;
    }
    out << fmt::format("format: ok ({} events)\n", t.events.size());
    auto problems = audit_custody(t.events);
    for (const auto &p : problems) {
        out << "custody: " << p << "\n";
    }
    out << (problems.empty() ? "custody: ok\n" : "custody: FAIL\n");
    bool same = replay(t).to_jsonl() == original;
    out << (same ? "replay: ok (byte-identical)\n" : "replay: FAIL (transcript differs)\n");
    return problems.empty() && same ? EXIT_OK : EXIT_FAILURE_GENERIC;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bidirectional EPR-block secure direct communication simulator", "bdc"};
    app.set_version_flag("--version", std::string(TOOL_VERSION));
    app.set_config("--config", "", "key=value file mirroring the long flag names");

    RunSpec spec;
    auto &c = spec.config;
    app.add_option("command", spec.command, "run | verify")
        ->required()
        ->check(CLI::IsMember({"run", "verify"}));
    app.add_option("--mode", spec.mode, "roundtrip | table-check | security-sweep | info-estimate")
        ->check(CLI::IsMember({"roundtrip", "table-check", "security-sweep", "info-estimate"}));
    app.add_option("--pairs", c.n_pairs, "EPR pairs per block")->capture_default_str();
    app.add_option("--check-fraction", c.check_fraction_1, "fraction of C photons checked in the first check")
        ->capture_default_str();
    app.add_option("--decoys", c.check_count_2, "decoy positions in the second transmission")->capture_default_str();
    app.add_option("--abort-threshold", c.abort_threshold, "tolerated first-check violations")
        ->capture_default_str();
    app.add_option("--eve", spec.eve, "none | intercept-z | intercept-x | intercept-rand | substitute")
        ->check(CLI::IsMember({"none", "intercept-z", "intercept-x", "intercept-rand", "substitute"}))
        ->capture_default_str();
    app.add_option("--eve-prob", c.eve.attack_probability, "per-photon attack probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--eve-legs", spec.eve_legs, "first | second | both (default depends on --eve)")
        ->check(CLI::IsMember({"first", "second", "both"}));
    app.add_option("--seed", c.seed, "64-bit RNG seed")->capture_default_str();
    app.add_option("--trials", spec.trials, "independent runs for sweep modes");
    app.add_option("--min-runs", spec.min_runs, "completed runs required by info-estimate")->capture_default_str();
    app.add_option("--alice-msg", spec.alice_msg, "hex | file:<path> | random | random:<bits>");
    app.add_option("--bob-msg", spec.bob_msg, "hex | file:<path> | random | random:<bits>");
    app.add_option("--out", spec.out, "CSV output path (a .meta.json sidecar is written next to it)");
    app.add_option("--transcript", spec.transcript, "transcript path (written by roundtrip, read by verify)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::CallForVersion &) {
        out << TOOL_VERSION << "\n";
        return EXIT_OK;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_CONFIG_ERROR;
    }

    try {
        c.eve.kind = *parse_eve_kind(spec.eve);
        c.eve.legs = spec.eve_legs.empty() ? EveStrategy::default_legs(c.eve.kind)
                                           : *parse_leg_selection(spec.eve_legs);
        if (spec.command == "verify") {
            if (spec.transcript.empty()) {
                throw UsageError("verify requires --transcript");
            }
            return run_verify(spec, out);
        }
        if (spec.mode.empty()) {
            throw UsageError("run requires --mode");
        }
        if (spec.mode == "table-check") {
            check_writable(spec.out);
            return run_table_check(spec, out);
        }
        c.validate();
        if ((spec.mode == "security-sweep" || spec.mode == "info-estimate") && spec.trials == 0) {
            throw UsageError(spec.mode + " requires --trials >= 1");
        }
        if (spec.mode == "security-sweep" && app.count("--eve") == 0) {
            throw UsageError("security-sweep requires --eve");
        }
        check_writable(spec.out);
        check_writable(spec.transcript);
        if (spec.mode == "roundtrip") {
            return run_roundtrip(spec, out);
        }
        if (spec.mode == "security-sweep") {
            return run_security_sweep(spec, out);
        }
        return run_info_estimate(spec, out, err);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_CONFIG_ERROR;
    } catch (const ConfigInvalid &e) {
        err << "error: invalid configuration: " << e.what() << "\n";
        return EXIT_CONFIG_ERROR;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_FAILURE_GENERIC;
    }
}

}  // namespace bdc
