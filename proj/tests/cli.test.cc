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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "bdc/transcript.h"

using namespace bdc;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields(const std::string &line) {
    std::vector<std::string> f;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) f.push_back(cell);
    return f;
}

class TempDir {
   public:
    TempDir() : path_(fs::temp_directory_path() / fs::path("bdc_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        fs::remove_all(path_);
    }
    std::string operator/(const std::string &name) const {
        return (path_ / name).string();
    }

   private:
    fs::path path_;
};

}  // namespace

TEST(cli, table_check_matches_golden) {
    TempDir dir;
    auto r = run({"run", "--mode", "table-check", "--out", dir / "t.csv"});
    EXPECT_EQ(r.code, EXIT_OK);
    EXPECT_NE(r.out.find("16/16"), std::string::npos);
    EXPECT_EQ(slurp(dir / "t.csv"), slurp(fs::path(BDC_GOLDEN_DIR) / "table_check.csv"));
    auto meta = Json::parse(slurp(dir / "t.csv.meta.json"));
    EXPECT_EQ(meta["mode"], "table-check");
    EXPECT_EQ(meta["version"], BDC_VERSION);
    EXPECT_EQ(meta["columns"].size(), 11u);
}

TEST(cli, roundtrip_example) {
    TempDir dir;
    auto r = run({"run", "--mode", "roundtrip", "--pairs", "64", "--seed", "7", "--alice-msg", "a5", "--bob-msg",
                  "5a", "--transcript", dir / "t.jsonl", "--out", dir / "r.csv"});
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    EXPECT_NE(r.out.find("bob_decoded=a5"), std::string::npos);
    EXPECT_NE(r.out.find("alice_decoded=5a"), std::string::npos);
    auto t = Transcript::read(dir / "t.jsonl");
    EXPECT_TRUE(t.verdict.completed);
    EXPECT_EQ(t.config.n_pairs, 64u);
    EXPECT_EQ(t.config.seed, 7u);

    auto rows = lines_of(slurp(dir / "r.csv"));
    ASSERT_EQ(rows.size(), 2u);
    auto header = fields(rows[0]);
    auto row = fields(rows[1]);
    ASSERT_EQ(header.size(), row.size());
    std::map<std::string, std::string> cell;
    for (size_t i = 0; i < header.size(); i++) cell[header[i]] = row[i];
    EXPECT_EQ(cell["verdict"], "completed");
    EXPECT_EQ(cell["alice_ok"], "true");
    EXPECT_EQ(cell["bob_ok"], "true");
    EXPECT_EQ(cell["seed"], "7");
    EXPECT_EQ(cell["version"], BDC_VERSION);
    EXPECT_EQ(cell["config_hash"].size(), 16u);
}

TEST(cli, roundtrip_default_messages_fill_capacity) {
    TempDir dir;
    auto r = run({"run", "--mode", "roundtrip", "--pairs", "16", "--decoys", "2", "--transcript", dir / "t.jsonl"});
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    auto t = Transcript::read(dir / "t.jsonl");
    EXPECT_EQ(t.alice_msg.payload_size(), 20u);
    EXPECT_EQ(t.bob_msg.payload_size(), 24u);
    EXPECT_EQ(t.verdict.bob_decoded, t.alice_msg);

    r = run({"run", "--mode", "roundtrip", "--pairs", "16", "--alice-msg", "random:5", "--bob-msg", "random:3",
             "--transcript", dir / "u.jsonl"});
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    auto u = Transcript::read(dir / "u.jsonl");
    EXPECT_EQ(u.alice_msg.payload_size(), 5u);
    EXPECT_EQ(u.bob_msg.payload_size(), 3u);
}

TEST(cli, message_from_file) {
    TempDir dir;
    {
        std::ofstream f(dir / "m.bin", std::ios::binary);
        f << "Hi";
    }
    auto r = run({"run", "--mode", "roundtrip", "--pairs", "32", "--alice-msg", "file:" + dir / "m.bin",
                  "--bob-msg", "", "--transcript", dir / "t.jsonl"});
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    EXPECT_NE(r.out.find("bob_decoded=4869"), std::string::npos) << r.out;
    EXPECT_EQ(run({"run", "--alice-msg", "file:" + dir / "missing"}).code, EXIT_CONFIG_ERROR);
}

TEST(cli, abort_exit_code) {
    auto r = run({"run", "--mode", "roundtrip", "--pairs", "64", "--check-fraction", "0.5", "--eve", "intercept-z",
                  "--seed", "1"});
    EXPECT_EQ(r.code, EXIT_PROTOCOL_ABORT);
    EXPECT_NE(r.out.find("reason=first_check_failed"), std::string::npos);
}

TEST(cli, config_errors) {
    TempDir dir;
    EXPECT_EQ(run({"run", "--bogus"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--mode", "teleport"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--alice-msg", "zz"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--alice-msg", "abc"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--check-fraction", "1.0"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--check-fraction", "0"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--pairs", "0"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--eve-prob", "1.5"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--eve", "ghost"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--decoys", "12"}).code, EXIT_CONFIG_ERROR);
    // 16 pairs, 4 checked: Alice can send 24 bits.
    EXPECT_EQ(run({"run", "--alice-msg", "ffffff"}).code, EXIT_CONFIG_ERROR);  // no --mode
    EXPECT_EQ(run({"run", "--mode", "roundtrip", "--alice-msg", "ffffff"}).code, EXIT_OK);
    auto over = run({"run", "--mode", "roundtrip", "--alice-msg", "ffffffff"});
    EXPECT_EQ(over.code, EXIT_CONFIG_ERROR);
    EXPECT_FALSE(over.err.empty());
    EXPECT_EQ(run({"run", "--mode", "roundtrip", "--out", "/nonexistent-dir/x.csv"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--mode", "roundtrip", "--transcript", "/nonexistent-dir/x.jsonl"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"verify"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"verify", "--transcript", dir / "missing.jsonl"}).code, EXIT_CONFIG_ERROR);
    EXPECT_EQ(run({"run", "--config", dir / "missing.ini"}).code, EXIT_CONFIG_ERROR);
}

TEST(cli, security_sweep_csv) {
    TempDir dir;
    std::vector<std::string> args{"run", "--mode", "security-sweep", "--eve", "intercept-z", "--pairs", "32",
                                  "--check-fraction", "0.25", "--trials", "400", "--seed", "3"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", dir / "a.csv"});
    b.insert(b.end(), {"--out", dir / "b.csv"});
    ASSERT_EQ(run(a).code, EXIT_OK);
    ASSERT_EQ(run(b).code, EXIT_OK);
    auto text = slurp(dir / "a.csv");
    EXPECT_EQ(text, slurp(dir / "b.csv"));
    auto rows = lines_of(text);
    ASSERT_EQ(rows.size(), 2u);
    auto header = fields(rows[0]);
    EXPECT_EQ(header.front(), "eve");
    EXPECT_EQ(header[header.size() - 3], "seed");
    EXPECT_EQ(header[header.size() - 2], "config_hash");
    EXPECT_EQ(header.back(), "version");
    auto row = fields(rows[1]);
    ASSERT_EQ(row.size(), header.size());
    std::map<std::string, std::string> cell;
    for (size_t i = 0; i < header.size(); i++) cell[header[i]] = row[i];
    EXPECT_EQ(cell["checked_photons"], "3200");
    EXPECT_NEAR(std::stod(cell["per_photon_rate"]), 0.25, 0.04);
    EXPECT_EQ(cell["analytic_per_photon_rate"], "0.25000000");
    EXPECT_LE(std::stod(cell["per_photon_ci_low"]), std::stod(cell["per_photon_rate"]));

    auto meta = Json::parse(slurp(dir / "a.csv.meta.json"));
    EXPECT_EQ(meta["mode"], "security-sweep");
    EXPECT_EQ(meta["seed"], 3);
    EXPECT_EQ(meta["trials"], 400);
    EXPECT_EQ(meta["config_hash"], cell["config_hash"]);

    // A different seed gives a different estimate.
    auto c = args;
    c.back() = "4";
    c.insert(c.end(), {"--out", dir / "c.csv"});
    ASSERT_EQ(run(c).code, EXIT_OK);
    EXPECT_NE(slurp(dir / "c.csv"), text);
}

TEST(cli, security_sweep_overwrites_output) {
    TempDir dir;
    for (auto eve : {"none", "intercept-rand", "substitute"}) {
        ASSERT_EQ(run({"run", "--mode", "security-sweep", "--eve", eve, "--decoys", "2", "--trials", "50", "--out",
                       dir / "s.csv"})
                      .code,
                  EXIT_OK);
    }
    auto rows = lines_of(slurp(dir / "s.csv"));
    ASSERT_EQ(rows.size(), 2u);
    auto row = fields(rows[1]);
    EXPECT_EQ(row[0], "substitute");
    EXPECT_EQ(row[2], "second");
}

TEST(cli, info_estimate) {
    TempDir dir;
    auto r = run({"run", "--mode", "info-estimate", "--pairs", "64", "--trials", "200", "--seed", "5", "--out",
                  dir / "i.csv"});
    ASSERT_EQ(r.code, EXIT_OK) << r.err;
    auto rows = lines_of(slurp(dir / "i.csv"));
    ASSERT_EQ(rows.size(), 2u);
    auto header = fields(rows[0]);
    auto row = fields(rows[1]);
    std::map<std::string, std::string> cell;
    for (size_t i = 0; i < header.size(); i++) cell[header[i]] = row[i];
    EXPECT_EQ(cell["completed_runs"], "200");
    EXPECT_EQ(cell["pairs_observed"], std::to_string(200 * 48));
    EXPECT_LT(std::stod(cell["alice_info_bits"]), 0.01);
    EXPECT_LT(std::stod(cell["bob_info_bits"]), 0.01);

    // All runs abort, so there is nothing to estimate.
    auto starved = run({"run", "--mode", "info-estimate", "--pairs", "64", "--check-fraction", "0.5", "--eve",
                        "intercept-z", "--trials", "5", "--min-runs", "1"});
    EXPECT_EQ(starved.code, EXIT_FAILURE_GENERIC);
    EXPECT_NE(starved.err.find("completed runs"), std::string::npos);
}

TEST(cli, config_file_and_precedence) {
    TempDir dir;
    {
        std::ofstream f(dir / "run.ini");
        f << "mode=roundtrip\npairs=32\nseed=11\ndecoys=3\n";
    }
    ASSERT_EQ(run({"run", "--config", dir / "run.ini", "--transcript", dir / "a.jsonl"}).code, EXIT_OK);
    auto a = Transcript::read(dir / "a.jsonl");
    EXPECT_EQ(a.config.n_pairs, 32u);
    EXPECT_EQ(a.config.seed, 11u);
    EXPECT_EQ(a.config.check_count_2, 3u);

    ASSERT_EQ(run({"run", "--config", dir / "run.ini", "--seed", "12", "--transcript", dir / "b.jsonl"}).code, EXIT_OK);
    auto b = Transcript::read(dir / "b.jsonl");
    EXPECT_EQ(b.config.n_pairs, 32u);
    EXPECT_EQ(b.config.seed, 12u);
}

TEST(cli, verify_transcripts) {
    TempDir dir;
    ASSERT_EQ(run({"run", "--mode", "roundtrip", "--pairs", "24", "--decoys", "2", "--seed", "9", "--transcript", dir / "t.jsonl"})
                  .code,
              EXIT_OK);
    auto ok = run({"verify", "--transcript", dir / "t.jsonl"});
    EXPECT_EQ(ok.code, EXIT_OK) << ok.out;
    EXPECT_NE(ok.out.find("custody: ok"), std::string::npos);
    EXPECT_NE(ok.out.find("replay: ok"), std::string::npos);

    auto lines = lines_of(slurp(dir / "t.jsonl"));
    auto write = [&](const std::string &name, const std::vector<std::string> &ls) {
        std::ofstream f(dir / name, std::ios::binary);
        for (const auto &l : ls) f << l << "\n";
        return dir / name;
    };

    // Flipped verdict: well-formed but not what the seed produces.
    auto forged = lines;
    auto &last = forged.back();
    auto pos = last.find("\"bob_decoded\":\"");
    ASSERT_NE(pos, std::string::npos);
    pos += 15;
    last[pos] = last[pos] == '0' ? '1' : '0';
    auto r = run({"verify", "--transcript", write("forged.jsonl", forged)});
    EXPECT_EQ(r.code, EXIT_FAILURE_GENERIC);
    EXPECT_NE(r.out.find("replay: FAIL"), std::string::npos);

    auto truncated = lines;
    truncated.pop_back();
    r = run({"verify", "--transcript", write("truncated.jsonl", truncated)});
    EXPECT_EQ(r.code, EXIT_FAILURE_GENERIC);
    EXPECT_NE(r.out.find("format: FAIL"), std::string::npos);
}

TEST(cli, binary_transcripts_are_byte_identical) {
    TempDir dir;
    std::string base = std::string(BDC_CLI_PATH) +
                       " run --mode roundtrip --pairs 32 --decoys 2 --seed 42 --eve intercept-rand --eve-prob 0.05 "
                       "--abort-threshold 32 --transcript ";
    ASSERT_EQ(std::system((base + dir / "a.jsonl" + " > /dev/null").c_str()), 0);
    ASSERT_EQ(std::system((base + dir / "b.jsonl" + " > /dev/null").c_str()), 0);
    auto a = slurp(dir / "a.jsonl");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b.jsonl"));
}

TEST(cli, binary_exit_codes) {
    auto status = [](const std::string &args) {
        int raw = std::system((std::string(BDC_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("run --mode table-check"), 0);
    EXPECT_EQ(status("run --nope"), 2);
    EXPECT_EQ(status("run --mode roundtrip --pairs 64 --check-fraction 0.5 --eve intercept-z --seed 1"), 3);
    EXPECT_EQ(status("--version"), 0);
    // Eve tolerated by the threshold corrupts the decoded messages.
    EXPECT_EQ(status("run --mode roundtrip --pairs 24 --eve intercept-z --abort-threshold 24 --seed 9"), 1);
}
