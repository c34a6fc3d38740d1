// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/ingestion.hpp>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

using namespace evmscan;

namespace
{
ErrorKind kind_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.kind();
    }
    ADD_FAILURE() << "no Error thrown";
    return ErrorKind::invalid_argument;
}

ContractRecord record(std::string id, std::string_view hex, std::optional<int> label = {})
{
    return {std::move(id), parse_hex(hex), label, {}, {}};
}

std::string addr(char c)
{
    return "0x" + std::string(40, c);
}

/// A JSON-RPC stub on a loopback port. The reply depends on the requested address's
/// first hex digit so one server covers every outcome.
class RpcStub
{
public:
    RpcStub()
    {
        m_server.Post("/rpc", [this](const httplib::Request& req, httplib::Response& res) {
            ++m_requests;
            const auto body = nlohmann::json::parse(req.body);
            m_last_method = body.at("method").get<std::string>();
            const auto a = body.at("params").at(0).get<std::string>();
            nlohmann::json reply = {{"jsonrpc", "2.0"}, {"id", body.at("id")}};
            switch (a[2])
            {
            case '1':
                reply["result"] = "0x6001600201";
                break;
            case '2':
                reply["result"] = "0x";
                break;
            case '3':
                res.status = 500;
                res.set_content("boom", "text/plain");
                return;
            case '4':
                reply["error"] = {{"code", -32000}, {"message", "header not found"}};
                break;
            default:
                reply["result"] = "0xzz";
                break;
            }
            res.set_content(reply.dump(), "application/json");
        });
        m_port = m_server.bind_to_any_port("127.0.0.1");
        m_thread = std::thread{[this] { m_server.listen_after_bind(); }};
        m_server.wait_until_ready();
    }
    ~RpcStub()
    {
        m_server.stop();
        m_thread.join();
    }
    [[nodiscard]] std::string url() const
    {
        return "http://127.0.0.1:" + std::to_string(m_port) + "/rpc";
    }
    [[nodiscard]] int requests() const { return m_requests; }
    [[nodiscard]] const std::string& last_method() const { return m_last_method; }

private:
    httplib::Server m_server;
    int m_port = 0;
    std::thread m_thread;
    std::atomic<int> m_requests{0};
    std::string m_last_method;
};
}  // namespace

TEST(jsonl, parses_records_and_collects_errors)
{
    const std::string text =
        "{\"id\":\"a\",\"bytecode\":\"0x6001\",\"label\":1,\"category\":\"reentrancy\"}\n"
        "\n"
        "not json\n"
        "{\"id\":\"b\",\"bytecode\":\"6002\",\"verdicts\":[true,false,true]}\r\n"
        "{\"id\":\"c\",\"bytecode\":\"\"}\n"
        "{\"id\":\"d\",\"bytecode\":\"60\",\"label\":2}\n";
    const auto r = parse_jsonl(text);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[0].source_id, "a");
    EXPECT_EQ(r.records[0].label, 1);
    EXPECT_EQ(r.records[0].category, "reentrancy");
    EXPECT_EQ(r.records[0].bytecode, parse_hex("6001"));
    EXPECT_FALSE(r.records[1].label);
    ASSERT_TRUE(r.records[1].verdicts);
    EXPECT_EQ(r.records[1].verdicts->vulnerable, (std::array<bool, 3>{true, false, true}));
    ASSERT_EQ(r.errors.size(), 3u);
    EXPECT_EQ(r.errors[0].line, 3u);
    EXPECT_EQ(r.errors[1].line, 5u);
    EXPECT_EQ(r.errors[2].line, 6u);
}

TEST(jsonl, all_bad_and_empty)
{
    EXPECT_EQ(kind_of([] { (void)parse_jsonl("x\ny\n"); }), ErrorKind::parse_error);
    const auto empty = parse_jsonl("\n\n");
    EXPECT_TRUE(empty.records.empty());
    EXPECT_TRUE(empty.errors.empty());
    EXPECT_EQ(kind_of([] { (void)load_jsonl("/nonexistent/corpus.jsonl"); }),
        ErrorKind::file_not_found);
}

TEST(jsonl, serialization_round_trip)
{
    ContractRecord r = record("x", "0xDEADbeef", 1);
    r.category = "overflow";
    r.verdicts = ToolVerdicts{};
    r.verdicts->vulnerable = {false, true, true};
    const auto line = to_jsonl_line(r);
    EXPECT_EQ(line,
        "{\"id\":\"x\",\"bytecode\":\"deadbeef\",\"label\":1,\"category\":\"overflow\","
        "\"verdicts\":[false,true,true]}");
    const auto back = parse_jsonl(line);
    ASSERT_EQ(back.records.size(), 1u);
    EXPECT_EQ(to_jsonl_line(back.records[0]), line);

    const auto path = std::filesystem::temp_directory_path() / "evmscan_ingestion_test.jsonl";
    std::ofstream{path} << line << "\n";
    EXPECT_EQ(load_jsonl(path).records.size(), 1u);
    std::filesystem::remove(path);
}

TEST(dedup, keeps_first_occurrence)
{
    std::vector<ContractRecord> corpus{record("a", "6001"), record("b", "6002"),
        record("c", "6001"), record("d", "6001")};
    const auto d = dedup(corpus);
    ASSERT_EQ(d.records.size(), 2u);
    EXPECT_EQ(d.removed, 2u);
    EXPECT_EQ(d.records[0].source_id, "a");
    EXPECT_EQ(d.records[1].source_id, "b");
    const auto again = dedup(d.records);
    EXPECT_EQ(again.removed, 0u);
    EXPECT_EQ(again.records.size(), 2u);
}

TEST(labels, modes)
{
    EXPECT_EQ(parse_label_mode("union"), LabelMode::union_);
    EXPECT_EQ(to_string(LabelMode::majority), "majority");
    EXPECT_EQ(kind_of([] { (void)parse_label_mode("vote"); }), ErrorKind::invalid_argument);

    std::vector<ContractRecord> corpus{record("a", "00"), record("b", "01")};
    corpus[0].verdicts = ToolVerdicts{};
    corpus[0].verdicts->vulnerable = {true, false, false};
    corpus[1].verdicts = ToolVerdicts{};
    corpus[1].verdicts->vulnerable = {true, true, false};
    const auto maj = attach_labels(corpus, LabelMode::majority);
    EXPECT_EQ(maj[0].label, 0);
    EXPECT_EQ(maj[1].label, 1);
    const auto uni = attach_labels(corpus, LabelMode::union_);
    EXPECT_EQ(uni[0].label, 1);

    EXPECT_EQ(kind_of([&] { (void)attach_labels(corpus, LabelMode::given); }),
        ErrorKind::missing_labels);
    corpus[1].verdicts.reset();
    try
    {
        (void)attach_labels(corpus, LabelMode::union_);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::missing_verdicts);
        EXPECT_NE(std::string{e.what()}.find("b"), std::string::npos);
    }
}

TEST(rpc, outcomes)
{
    RpcStub stub;
    const auto code = fetch_code(stub.url(), addr('1'));
    EXPECT_EQ(code, parse_hex("6001600201"));
    EXPECT_EQ(code.source_id(), addr('1'));
    EXPECT_EQ(stub.last_method(), "eth_getCode");

    EXPECT_EQ(kind_of([&] { (void)fetch_code(stub.url(), addr('2')); }), ErrorKind::empty_code);
    try
    {
        (void)fetch_code(stub.url(), addr('3'));
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::transport);
        EXPECT_NE(std::string{e.what()}.find("500"), std::string::npos);
    }
    EXPECT_EQ(kind_of([&] { (void)fetch_code(stub.url(), addr('4')); }), ErrorKind::rpc_error);
    EXPECT_EQ(kind_of([&] { (void)fetch_code(stub.url(), addr('5')); }), ErrorKind::malformed_hex);

    const int before = stub.requests();
    EXPECT_EQ(kind_of([&] { (void)fetch_code(stub.url(), "0x1234"); }),
        ErrorKind::invalid_argument);
    EXPECT_EQ(stub.requests(), before);
}

TEST(rpc, batch_keeps_order)
{
    RpcStub stub;
    std::vector<std::string> addresses;
    for (int i = 0; i < 12; ++i)
        addresses.push_back(addr(i % 3 == 2 ? '2' : '1'));
    const auto results = fetch_codes(stub.url(), addresses, 4);
    ASSERT_EQ(results.size(), addresses.size());
    for (std::size_t i = 0; i < results.size(); ++i)
    {
        if (i % 3 == 2)
            EXPECT_EQ(std::get<Error>(results[i]).kind(), ErrorKind::empty_code);
        else
            EXPECT_EQ(std::get<Bytecode>(results[i]), parse_hex("6001600201"));
    }
}

TEST(rpc, unreachable_endpoint)
{
    RpcOptions opts;
    opts.timeout = std::chrono::milliseconds{500};
    EXPECT_EQ(kind_of([&] { (void)fetch_code("http://127.0.0.1:1/rpc", addr('1'), opts); }),
        ErrorKind::transport);
}

TEST(rpc, endpoint_from_environment)
{
    ::setenv("EVMSCAN_RPC_URL", "http://node:8545", 1);
    EXPECT_EQ(default_rpc_endpoint(), "http://node:8545");
    ::setenv("EVMSCAN_RPC_URL", "", 1);
    EXPECT_FALSE(default_rpc_endpoint());
    ::unsetenv("EVMSCAN_RPC_URL");
    EXPECT_FALSE(default_rpc_endpoint());
}
