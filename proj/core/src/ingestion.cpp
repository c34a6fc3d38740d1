// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/ingestion.hpp>

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace evmscan
{
namespace
{
ContractRecord parse_record(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error{ErrorKind::parse_error, "line is not a JSON object"};

    ContractRecord r;
    if (!j.contains("id") || !j["id"].is_string())
        throw Error{ErrorKind::parse_error, "missing string field \"id\""};
    r.source_id = j["id"].get<std::string>();

    if (!j.contains("bytecode") || !j["bytecode"].is_string())
        throw Error{ErrorKind::parse_error, "missing string field \"bytecode\""};
    r.bytecode = parse_hex(j["bytecode"].get<std::string>());
    if (r.bytecode.empty())
        throw Error{ErrorKind::parse_error, "empty bytecode"};
    r.bytecode.set_source_id(r.source_id);

    if (j.contains("label") && !j["label"].is_null())
    {
        const auto& l = j["label"];
        if (!l.is_number_integer() || (l.get<int>() != 0 && l.get<int>() != 1))
            throw Error{ErrorKind::parse_error, "\"label\" must be 0 or 1"};
        r.label = l.get<int>();
    }
    if (j.contains("category") && !j["category"].is_null())
    {
        if (!j["category"].is_string())
            throw Error{ErrorKind::parse_error, "\"category\" must be a string"};
        r.category = j["category"].get<std::string>();
    }
    if (j.contains("verdicts") && !j["verdicts"].is_null())
    {
        const auto& v = j["verdicts"];
        if (!v.is_array() || v.size() != 3)
            throw Error{ErrorKind::parse_error, "\"verdicts\" must hold exactly 3 booleans"};
        ToolVerdicts tv;
        for (std::size_t k = 0; k < 3; ++k)
        {
            if (!v[k].is_boolean())
                throw Error{ErrorKind::parse_error, "\"verdicts\" must hold exactly 3 booleans"};
            tv.vulnerable[k] = v[k].get<bool>();
        }
        r.verdicts = tv;
    }
    return r;
}

struct Endpoint
{
    std::string scheme_host_port;
    std::string path;
};

Endpoint split_url(std::string_view url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos)
        throw Error{ErrorKind::invalid_argument, "endpoint URL needs a scheme: " + std::string{url}};
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string_view::npos)
        return {std::string{url}, "/"};
    return {std::string{url.substr(0, path_start)}, std::string{url.substr(path_start)}};
}

bool is_address(std::string_view a)
{
    if (a.size() != 42 || a[0] != '0' || (a[1] != 'x' && a[1] != 'X'))
        return false;
    for (const auto c : a.substr(2))
    {
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}
}  // namespace

LoadResult parse_jsonl(std::string_view text)
{
    LoadResult out;
    std::size_t line_no = 0;
    std::size_t non_blank = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos)
        {
            if (end == text.size())
                break;
            continue;
        }
        ++non_blank;
        try
        {
            out.records.push_back(parse_record(nlohmann::json::parse(line)));
        }
        catch (const nlohmann::json::exception& e)
        {
            out.errors.push_back({line_no, e.what()});
        }
        catch (const Error& e)
        {
            out.errors.push_back({line_no, e.what()});
        }
        if (end == text.size())
            break;
    }
    if (non_blank > 0 && out.records.empty())
        throw Error{ErrorKind::parse_error,
            "all " + std::to_string(non_blank) + " lines failed; first at line " +
                std::to_string(out.errors.front().line) + ": " + out.errors.front().message};
    return out;
}

LoadResult load_jsonl(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorKind::file_not_found, path.string()};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_jsonl(buf.str());
}

std::string to_jsonl_line(const ContractRecord& record)
{
    nlohmann::ordered_json j;
    j["id"] = record.source_id;
    j["bytecode"] = to_hex(record.bytecode.bytes());
    if (record.label)
        j["label"] = *record.label;
    if (record.category)
        j["category"] = *record.category;
    if (record.verdicts)
        j["verdicts"] = record.verdicts->vulnerable;
    return j.dump();
}

DedupResult dedup(std::vector<ContractRecord> corpus)
{
    struct BytesHash
    {
        std::size_t operator()(std::span<const uint8_t> b) const noexcept
        {
            return std::hash<std::string_view>{}(
                {reinterpret_cast<const char*>(b.data()), b.size()});
        }
    };
    struct BytesEq
    {
        bool operator()(std::span<const uint8_t> a, std::span<const uint8_t> b) const noexcept
        {
            return std::equal(a.begin(), a.end(), b.begin(), b.end());
        }
    };

    DedupResult out;
    std::unordered_set<std::span<const uint8_t>, BytesHash, BytesEq> seen;
    out.records.reserve(corpus.size());
    for (auto& r : corpus)
    {
        // Spans point into records already moved into out.records; reserve() keeps them valid.
        if (seen.contains(r.bytecode.bytes()))
        {
            ++out.removed;
            continue;
        }
        out.records.push_back(std::move(r));
        seen.insert(out.records.back().bytecode.bytes());
    }
    return out;
}

std::string_view to_string(LabelMode mode) noexcept
{
    switch (mode)
    {
    case LabelMode::given:
        return "given";
    case LabelMode::majority:
        return "majority";
    case LabelMode::union_:
        return "union";
    }
    return "given";
}

LabelMode parse_label_mode(std::string_view name)
{
    if (name == "given")
        return LabelMode::given;
    if (name == "majority")
        return LabelMode::majority;
    if (name == "union")
        return LabelMode::union_;
    throw Error{ErrorKind::invalid_argument, "unknown voting mode '" + std::string{name} + "'"};
}

std::vector<ContractRecord> attach_labels(std::vector<ContractRecord> corpus, LabelMode mode)
{
    std::vector<std::string> missing;
    for (auto& r : corpus)
    {
        if (mode == LabelMode::given)
        {
            if (!r.label)
                missing.push_back(r.source_id);
        }
        else if (!r.verdicts)
        {
            missing.push_back(r.source_id);
        }
        else
        {
            r.label = mode == LabelMode::majority ? majority_label(*r.verdicts)
                                                  : union_label(*r.verdicts);
        }
    }
    if (!missing.empty())
    {
        std::string ids;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i)
            ids += (i ? ", " : "") + missing[i];
        if (missing.size() > 20)
            ids += ", ...";
        const auto kind =
            mode == LabelMode::given ? ErrorKind::missing_labels : ErrorKind::missing_verdicts;
        throw Error{kind, std::to_string(missing.size()) + " record(s): " + ids};
    }
    return corpus;
}

Bytecode fetch_code(
    std::string_view endpoint_url, std::string_view address, const RpcOptions& options)
{
    if (!is_address(address))
        throw Error{ErrorKind::invalid_argument,
            "address must be 0x followed by 40 hex digits: " + std::string{address}};

    const auto ep = split_url(endpoint_url);
    httplib::Client client{ep.scheme_host_port};
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);

    const nlohmann::ordered_json body = {{"jsonrpc", "2.0"}, {"id", 1}, {"method", "eth_getCode"},
        {"params", {std::string{address}, "latest"}}};
    const auto res = client.Post(ep.path, body.dump(), "application/json");
    if (!res)
        throw Error{ErrorKind::transport, httplib::to_string(res.error())};
    if (res->status != 200)
        throw Error{ErrorKind::transport, "HTTP " + std::to_string(res->status)};

    nlohmann::json reply;
    try
    {
        reply = nlohmann::json::parse(res->body);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorKind::rpc_error, std::string{"invalid JSON reply: "} + e.what()};
    }
    if (reply.contains("error") && !reply["error"].is_null())
        throw Error{ErrorKind::rpc_error, reply["error"].dump()};
    if (!reply.contains("result") || !reply["result"].is_string())
        throw Error{ErrorKind::rpc_error, "reply has no string \"result\""};

    auto code = parse_hex(reply["result"].get<std::string>());
    if (code.empty())
        throw Error{ErrorKind::empty_code, std::string{address} + " has no code"};
    code.set_source_id(std::string{address});
    return code;
}

std::vector<FetchOutcome> fetch_codes(std::string_view endpoint_url,
    std::span<const std::string> addresses, std::size_t max_in_flight, const RpcOptions& options)
{
    std::vector<FetchOutcome> results(addresses.size(), Error{ErrorKind::transport, "not run"});
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < addresses.size(); i = next++)
        {
            try
            {
                results[i] = fetch_code(endpoint_url, addresses[i], options);
            }
            catch (const Error& e)
            {
                results[i] = e;
            }
        }
    };

    const auto n_workers = std::min(std::max<std::size_t>(max_in_flight, 1), addresses.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w)
        pool.emplace_back(worker);
    pool.clear();
    return results;
}

std::optional<std::string> default_rpc_endpoint()
{
    const char* v = std::getenv("EVMSCAN_RPC_URL");
    if (v == nullptr || *v == '\0')
        return std::nullopt;
    return std::string{v};
}
}  // namespace evmscan
