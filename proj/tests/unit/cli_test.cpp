// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace evmscan;

namespace
{
struct Result
{
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const auto code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in{p, std::ios::binary};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        m_dir = fs::temp_directory_path() / ("evmscan_cli_" + std::string{info->name()});
        fs::remove_all(m_dir);
        fs::create_directories(m_dir);
    }
    void TearDown() override { fs::remove_all(m_dir); }

    [[nodiscard]] std::string path(const std::string& name) const { return (m_dir / name).string(); }

    void write(const std::string& name, const std::string& text) const
    {
        std::ofstream{m_dir / name, std::ios::binary} << text;
    }

    /// featurize + train on a small synthetic corpus; returns the train exit code.
    int build_model(const std::string& tag, uint64_t seed)
    {
        write(tag + ".jsonl",
            test::to_jsonl(test::synthetic_corpus(24, seed, test::synthetic_categories())));
        EXPECT_EQ(run({"featurize", path(tag + ".jsonl"), "-o", path(tag + ".mat"), "--vocab",
                      path(tag + ".vocab.json"), "--labels", path(tag + ".labels")})
                      .code,
            0);
        return run({"train", "--matrix", path(tag + ".mat"), "--labels", path(tag + ".labels"),
                       "--vocab", path(tag + ".vocab.json"), "--model", path(tag + ".model.json"),
                       "--epochs", "3", "--hidden-width", "8", "--batch-size", "8", "-q"})
            .code;
    }

    fs::path m_dir;
};
}  // namespace

TEST(cli_exit, mapping)
{
    EXPECT_EQ(cli::exit_code(ErrorKind::malformed_hex), 2);
    EXPECT_EQ(cli::exit_code(ErrorKind::file_not_found), 3);
    EXPECT_EQ(cli::exit_code(ErrorKind::transport), 3);
    EXPECT_EQ(cli::exit_code(ErrorKind::single_class_dataset), 4);
    EXPECT_EQ(cli::exit_code(ErrorKind::vocabulary_mismatch), 5);
    EXPECT_EQ(cli::exit_code(ErrorKind::dimension_mismatch), 5);
    EXPECT_EQ(cli::exit_code(ErrorKind::invalid_argument), 64);
}

TEST(cli_usage, errors)
{
    EXPECT_EQ(run({}).code, 64);
    EXPECT_EQ(run({"frobnicate"}).code, 64);
    EXPECT_EQ(run({"disasm", "6001", "--bogus"}).code, 64);
    const auto help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("featurize"), std::string::npos);
}

TEST(cli_disasm, listing_and_bad_hex)
{
    const auto r = run({"disasm", "0x6001600201"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("PUSH1"), std::string::npos);
    EXPECT_NE(r.out.find("ADD"), std::string::npos);
    const auto bad = run({"disasm", "0x6g"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_FALSE(bad.err.empty());
}

TEST(cli_cfg, summary)
{
    EXPECT_EQ(run({"cfg", "6004600657005b00"}).out, "3 blocks, 2 edges, 0 unresolved\n");
    EXPECT_EQ(run({"cfg", "3456"}).out, "1 blocks, 0 edges, 1 unresolved\n");
}

TEST_F(CliTest, pipeline_round_trip)
{
    ASSERT_EQ(build_model("a", 1), 0);
    const auto p = run({"predict", path("a.jsonl"), "--model", path("a.model.json"), "--vocab",
        path("a.vocab.json"), "--out", path("a.pred")});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_NE(p.out.find("# 24 contracts"), std::string::npos);
    std::istringstream lines{slurp(path("a.pred"))};
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line))
    {
        std::istringstream f{line};
        std::string id;
        int label = -1;
        double prob = -1;
        f >> id >> label >> prob;
        EXPECT_EQ(id, "c" + std::to_string(n));
        EXPECT_TRUE(label == 0 || label == 1);
        EXPECT_GE(prob, 0.0);
        EXPECT_LE(prob, 1.0);
        ++n;
    }
    EXPECT_EQ(n, 24u);

    const auto e = run({"evaluate", path("a.jsonl"), "--model", path("a.model.json"), "--vocab",
        path("a.vocab.json"), "--report", path("a.report.json")});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_NE(e.out.find("accuracy"), std::string::npos);
    EXPECT_NE(slurp(path("a.report.json")).find("\"weighted_f1\""), std::string::npos);

    const auto emb = run({"embed", path("a.jsonl"), "--model", path("a.model.json"), "--vocab",
        path("a.vocab.json")});
    ASSERT_EQ(emb.code, 0) << emb.err;
    EXPECT_EQ(emb.out.rfind("c0,", 0), 0u);
}

TEST_F(CliTest, vocabulary_mismatch)
{
    ASSERT_EQ(build_model("a", 1), 0);
    ASSERT_EQ(build_model("b", 2), 0);
    const auto r = run({"predict", path("a.jsonl"), "--model", path("a.model.json"), "--vocab",
        path("b.vocab.json")});
    EXPECT_EQ(r.code, 5);
    EXPECT_NE(r.err.find("vocabulary"), std::string::npos);
}

TEST_F(CliTest, dataset_errors)
{
    auto corpus = test::synthetic_corpus(6, 3, {"overflow"});
    for (auto& r : corpus)
        r.label = 0;
    write("benign.jsonl", test::to_jsonl(corpus));
    ASSERT_EQ(run({"featurize", path("benign.jsonl"), "-o", path("m"), "--vocab", path("v"),
                  "--labels", path("l")})
                  .code,
        0);
    EXPECT_EQ(run({"train", "--matrix", path("m"), "--labels", path("l"), "--vocab", path("v"),
                  "--model", path("model"), "-q"})
                  .code,
        4);

    corpus[0].label.reset();
    write("unlabeled.jsonl", test::to_jsonl(corpus));
    EXPECT_EQ(run({"featurize", path("unlabeled.jsonl"), "-o", path("m2"), "--vocab", path("v2"),
                  "--labels", path("l2")})
                  .code,
        4);
    EXPECT_EQ(run({"featurize", path("missing.jsonl"), "-o", path("m3"), "--vocab", path("v3")})
                  .code,
        3);
}

TEST_F(CliTest, config_precedence)
{
    write("run.toml", "[training]\nepochs = 7\nlearning_rate = 0.5\n[network]\nhidden_width = 32\n");
    const auto defaults = run({"train", "--print-config"});
    ASSERT_EQ(defaults.code, 0);
    EXPECT_NE(defaults.out.find("epochs = 300\n"), std::string::npos);
    EXPECT_NE(defaults.out.find("hidden_width = 512\n"), std::string::npos);

    const auto from_file = run({"train", "--print-config", "--config", path("run.toml")});
    EXPECT_NE(from_file.out.find("epochs = 7\n"), std::string::npos);
    EXPECT_NE(from_file.out.find("learning_rate = 0.5\n"), std::string::npos);
    EXPECT_NE(from_file.out.find("hidden_width = 32\n"), std::string::npos);

    const auto flag_wins =
        run({"train", "--print-config", "--config", path("run.toml"), "--epochs", "9"});
    EXPECT_NE(flag_wins.out.find("epochs = 9\n"), std::string::npos);
    EXPECT_NE(flag_wins.out.find("learning_rate = 0.5\n"), std::string::npos);

    write("bad.toml", "[training]\nepochz = 7\n");
    EXPECT_EQ(run({"train", "--print-config", "--config", path("bad.toml")}).code, 2);
    EXPECT_EQ(run({"train", "--print-config", "--config", path("none.toml")}).code, 3);
    EXPECT_EQ(run({"train", "--print-config", "--lr", "-1"}).code, 64);
}
