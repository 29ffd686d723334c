#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdmm/matrix.hpp"
#include "sdmm/rng.hpp"
#include "sdmm/scheme.hpp"

namespace sdmm {

struct WorkerEndpoint {
    std::string host;
    std::uint16_t port;

    auto operator<=>(const WorkerEndpoint&) const = default;
};

/// Everything one server observed in one job: the shares it received and the
/// product it returned. This is the honest-but-curious adversary's view.
struct ServerRecord {
    std::uint32_t server;  // 1-based
    Matrix share_a;
    Matrix share_b;
    Matrix product;
    std::chrono::system_clock::time_point dispatched_at;
    std::chrono::system_clock::time_point completed_at;
};

struct LeakageLog {
    std::vector<ServerRecord> records;  // exactly one per server, in index order
};

struct RunResult {
    Matrix product;
    LeakageLog log;
};

/// A remote worker failure, tagged with the 1-based server index.
class WorkerError : public std::runtime_error {
public:
    WorkerError(std::uint32_t server, const std::string& message)
        : std::runtime_error("server " + std::to_string(server) + ": " + message),
          server_(server) {}

    std::uint32_t server() const { return server_; }

private:
    std::uint32_t server_;
};

/// Encodes, runs all server products in-process on up to `workers` threads,
/// and decodes. The result is independent of the worker count.
RunResult run_local(const Matrix& a, const Matrix& b, const SchemePlan& plan,
                    UniformFieldRng& rng, unsigned workers = 1);

struct RemoteOptions {
    std::chrono::milliseconds timeout{30000};
};

/// Same job against one TCP worker per server (exactly N endpoints, matched
/// by index). Any unreachable or failing worker aborts the run with a
/// WorkerError naming it; there is no straggler tolerance, decoding needs all
/// N responses. Repeated endpoints are accepted with a warning on stderr
/// since distinct-server collusion assumptions no longer hold.
RunResult run_remote(const Matrix& a, const Matrix& b, const SchemePlan& plan,
                     UniformFieldRng& rng, const std::vector<WorkerEndpoint>& endpoints,
                     const RemoteOptions& options = {});

/// The joint observation of a set of servers, in ascending index order.
struct CollusionView {
    struct Entry {
        std::uint32_t server;
        Matrix share_a;
        Matrix share_b;
    };
    std::vector<Entry> entries;
};

CollusionView collusion_view(const LeakageLog& log, const std::vector<std::uint32_t>& servers);

/// JSON rendering of a view for audit reports.
std::string to_json(const CollusionView& view);

}  // namespace sdmm
