#include "sdmm/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <iostream>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "sdmm/protocol.hpp"
#include "socket_io.hpp"

namespace sdmm {

RunResult run_local(const Matrix& a, const Matrix& b, const SchemePlan& plan,
                    UniformFieldRng& rng, unsigned workers) {
    const ShareSet shares = encode(a, b, plan, rng);
    const std::size_t n = plan.server_count();
    const PrimeField& field = plan.field();

    std::vector<ServerRecord> records(n);
    const unsigned used = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += used) {
                ServerRecord& rec = records[i];
                rec.server = static_cast<std::uint32_t>(i + 1);
                rec.share_a = shares.share_a[i];
                rec.share_b = shares.share_b[i];
                rec.dispatched_at = std::chrono::system_clock::now();
                rec.product = server_multiply(rec.share_a, rec.share_b, field);
                rec.completed_at = std::chrono::system_clock::now();
            }
        });
    }
    for (std::thread& t : pool)
        t.join();

    std::vector<Matrix> products;
    products.reserve(n);
    for (const ServerRecord& rec : records)
        products.push_back(rec.product);

    RunResult result;
    result.product = decode(products, plan);
    result.log.records = std::move(records);
    return result;
}

namespace {

Matrix compute_remote(const WorkerEndpoint& endpoint, std::uint32_t server,
                      const wire::ComputeRequest& request, const RemoteOptions& options) {
    auto fd = net::connect_to(endpoint.host, endpoint.port, options.timeout);
    if (!fd)
        throw WorkerError(server, "cannot connect to " + endpoint.host + ":" +
                                      std::to_string(endpoint.port));
    struct FdGuard {
        int fd;
        ~FdGuard() { ::close(fd); }
    } guard{*fd};

    if (!net::write_frame_bytes(*fd, wire::encode_compute(request)))
        throw WorkerError(server, "upload failed");
    net::FrameRead frame = net::read_frame(*fd, wire::kMaxPayloadBytes);
    if (frame.status != net::ReadStatus::Ok || frame.oversized)
        throw WorkerError(server, "no response (timeout or disconnect)");
    auto parsed = wire::parse_payload(frame.payload);
    if (std::holds_alternative<wire::ErrorCode>(parsed))
        throw WorkerError(server, "unparseable response");
    const wire::Message& msg = std::get<wire::Message>(parsed);
    if (const auto* err = std::get_if<wire::ErrorMessage>(&msg))
        throw WorkerError(server, "worker reported protocol error code " +
                                      std::to_string(static_cast<std::uint32_t>(err->code)));
    const auto* result = std::get_if<wire::ResultMessage>(&msg);
    if (result == nullptr)
        throw WorkerError(server, "unexpected response type");
    return result->product;
}

}  // namespace

RunResult run_remote(const Matrix& a, const Matrix& b, const SchemePlan& plan,
                     UniformFieldRng& rng, const std::vector<WorkerEndpoint>& endpoints,
                     const RemoteOptions& options) {
    const std::size_t n = plan.server_count();
    if (endpoints.size() != n)
        throw std::invalid_argument("run_remote: need exactly " + std::to_string(n) +
                                    " endpoints, got " + std::to_string(endpoints.size()));
    {
        std::set<WorkerEndpoint> unique(endpoints.begin(), endpoints.end());
        if (unique.size() != endpoints.size())
            std::cerr << "warning: repeated worker endpoints; colluding-server assumptions "
                         "may not hold across logical servers on one machine\n";
    }

    const ShareSet shares = encode(a, b, plan, rng);
    std::vector<ServerRecord> records(n);
    std::vector<std::string> failures(n);

    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pool.emplace_back([&, i] {
            ServerRecord& rec = records[i];
            rec.server = static_cast<std::uint32_t>(i + 1);
            rec.share_a = shares.share_a[i];
            rec.share_b = shares.share_b[i];
            rec.dispatched_at = std::chrono::system_clock::now();
            wire::ComputeRequest request{plan.field().modulus(), shares.share_a[i],
                                         shares.share_b[i]};
            try {
                rec.product = compute_remote(endpoints[i], rec.server, request, options);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
            rec.completed_at = std::chrono::system_clock::now();
        });
    }
    for (std::thread& t : pool)
        t.join();

    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i].empty())
            throw WorkerError(static_cast<std::uint32_t>(i + 1), failures[i]);
    }

    std::vector<Matrix> products;
    products.reserve(n);
    for (const ServerRecord& rec : records)
        products.push_back(rec.product);

    RunResult result;
    result.product = decode(products, plan);
    result.log.records = std::move(records);
    return result;
}

CollusionView collusion_view(const LeakageLog& log, const std::vector<std::uint32_t>& servers) {
    std::set<std::uint32_t> wanted;
    for (std::uint32_t s : servers) {
        if (s < 1 || s > log.records.size())
            throw std::invalid_argument("collusion_view: server index " + std::to_string(s) +
                                        " out of range");
        wanted.insert(s);
    }
    CollusionView view;
    for (std::uint32_t s : wanted) {
        const ServerRecord& rec = log.records[s - 1];
        view.entries.push_back({rec.server, rec.share_a, rec.share_b});
    }
    return view;
}

std::string to_json(const CollusionView& view) {
    nlohmann::json j;
    j["servers"] = nlohmann::json::array();
    for (const CollusionView::Entry& e : view.entries) {
        nlohmann::json share_a{{"rows", e.share_a.rows()},
                               {"cols", e.share_a.cols()},
                               {"entries", std::vector<std::uint64_t>(e.share_a.entries().begin(),
                                                                      e.share_a.entries().end())}};
        nlohmann::json share_b{{"rows", e.share_b.rows()},
                               {"cols", e.share_b.cols()},
                               {"entries", std::vector<std::uint64_t>(e.share_b.entries().begin(),
                                                                      e.share_b.entries().end())}};
        j["servers"].push_back(
            {{"server", e.server}, {"share_a", share_a}, {"share_b", share_b}});
    }
    return j.dump();
}

}  // namespace sdmm
