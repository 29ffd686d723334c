// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "sdmm/cost.hpp"
#include "sdmm/field.hpp"
#include "sdmm/harness.hpp"
#include "sdmm/protocol.hpp"
#include "sdmm/scheme.hpp"

using namespace sdmm;

namespace {

// ---------------------------------------------------------------- utilities

struct Failure {
    std::string detail;
};

struct Check {
    std::ostringstream detail;
    bool ok = true;

    template <typename T, typename U>
    void equal(const T& got, const U& expected, const std::string& label) {
        if (!(got == static_cast<T>(expected))) {
            ok = false;
            detail << label << " (got " << got << ", expected " << expected << "); ";
        }
    }

    void require(bool condition, const std::string& label) {
        if (!condition) {
            ok = false;
            detail << label << "; ";
        }
    }
};

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t q, std::mt19937_64& rng) {
    Matrix m(rows, cols);
    for (std::uint64_t& e : m.entries())
        e = rng() % q;
    return m;
}

Matrix schoolbook(const Matrix& a, const Matrix& b, std::uint64_t q) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            unsigned __int128 acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc += static_cast<unsigned __int128>(a(i, k)) * b(k, j) % q;
            out(i, j) = static_cast<std::uint64_t>(acc % q);
        }
    return out;
}

struct GridPlan {
    PartitionParams params;
    SchemePlan plan;
    bool minimal;
};

// Every plan in the end-to-end grid: t, s, d in {1,2,3}, T in {1,2}, with
// both the searched-minimal and the closed-form server count.
std::vector<GridPlan> build_grid_plans() {
    std::vector<GridPlan> plans;
    for (std::uint32_t t = 1; t <= 3; ++t)
        for (std::uint32_t s = 1; s <= 3; ++s)
            for (std::uint32_t d = 1; d <= 3; ++d)
                for (std::uint32_t T = 1; T <= 2; ++T) {
                    const PartitionParams params{t, s, d, T};
                    plans.push_back({params, make_plan(params, ServerCountChoice::minimal()), true});
                    plans.push_back(
                        {params, make_plan(params, ServerCountChoice::guaranteed()), false});
                }
    return plans;
}

bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (idx[i] < n - (k - 1 - i)) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// ------------------------------------------------------------ worker runner

std::string cli_path() {
    if (const char* env = std::getenv("SDMM_CLI"))
        return env;
    for (const char* candidate : {"../tools/sdmm", "./tools/sdmm", "tools/sdmm"})
        if (::access(candidate, X_OK) == 0)
            return candidate;
    return "";
}

struct WorkerProcess {
    pid_t pid = -1;
    std::uint16_t port = 0;
};

WorkerProcess spawn_worker(const std::string& cli) {
    int pipefd[2];
    if (::pipe(pipefd) != 0)
        return {};
    pid_t pid = ::fork();
    if (pid < 0)
        return {};
    if (pid == 0) {
        ::dup2(pipefd[1], STDOUT_FILENO);
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        ::execl(cli.c_str(), cli.c_str(), "serve", "--port", "0", static_cast<char*>(nullptr));
        _exit(127);
    }
    ::close(pipefd[1]);
    // first stdout line announces the bound port
    std::string line;
    char ch;
    while (::read(pipefd[0], &ch, 1) == 1 && ch != '\n')
        line.push_back(ch);
    ::close(pipefd[0]);
    WorkerProcess w;
    w.pid = pid;
    w.port = static_cast<std::uint16_t>(std::atoi(line.c_str()));
    return w;
}

void kill_worker(WorkerProcess& w) {
    if (w.pid > 0) {
        ::kill(w.pid, SIGTERM);
        ::waitpid(w.pid, nullptr, 0);
        w.pid = -1;
    }
}

bool worker_alive(const WorkerProcess& w) {
    return w.pid > 0 && ::waitpid(w.pid, nullptr, WNOHANG) == 0;
}

// Minimal blocking client used by the fuzz run.
class RawClient {
public:
    explicit RawClient(std::uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        if (fd_ >= 0 && ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
            ::close(fd_);
            fd_ = -1;
        }
        if (fd_ >= 0) {
            timeval tv{2, 0};
            ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
        }
    }
    ~RawClient() {
        if (fd_ >= 0)
            ::close(fd_);
    }

    bool connected() const { return fd_ >= 0; }

    bool send_bytes(const std::vector<std::uint8_t>& bytes) {
        return fd_ >= 0 && ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL) ==
                               static_cast<ssize_t>(bytes.size());
    }

    // Reads one frame payload; empty optional on disconnect/timeout.
    std::optional<std::vector<std::uint8_t>> read_payload() {
        std::uint8_t len_bytes[4];
        if (!recv_exact(len_bytes, 4))
            return std::nullopt;
        std::uint32_t len = 0;
        for (int i = 0; i < 4; ++i)
            len |= static_cast<std::uint32_t>(len_bytes[i]) << (8 * i);
        if (len > wire::kMaxPayloadBytes)
            return std::nullopt;
        std::vector<std::uint8_t> payload(len);
        if (!recv_exact(payload.data(), len))
            return std::nullopt;
        return payload;
    }

private:
    bool recv_exact(std::uint8_t* buf, std::size_t n) {
        std::size_t got = 0;
        while (got < n) {
            ssize_t r = ::recv(fd_, buf + got, n - got, 0);
            if (r <= 0)
                return false;
            got += static_cast<std::size_t>(r);
        }
        return true;
    }

    int fd_ = -1;
};

bool logs_equivalent(const LeakageLog& x, const LeakageLog& y) {
    if (x.records.size() != y.records.size())
        return false;
    for (std::size_t i = 0; i < x.records.size(); ++i) {
        const ServerRecord& a = x.records[i];
        const ServerRecord& b = y.records[i];
        if (a.server != b.server || a.share_a != b.share_a || a.share_b != b.share_b ||
            a.product != b.product)
            return false;  // timestamps excluded by design
    }
    return true;
}

// ----------------------------------------------------------------- criteria

void criterion1(Check& c) {
    const PartitionParams params{2, 2, 2, 1};
    c.equal(minimal_server_count(params), 13, "minimal server count");
    c.require(is_valid_server_count(params, 13), "13 must validate");
    c.require(!is_valid_server_count(params, 12), "12 must not validate");
    c.equal(guaranteed_server_count(params), 15, "closed-form server count");
    c.require(is_valid_server_count(params, 15), "15 must validate");
}

void criterion2(Check& c) {
    for (std::uint32_t s = 1; s <= 6; ++s)
        for (std::uint32_t T = 1; T <= 3; ++T)
            c.equal(minimal_server_count({1, s, 1, T}), std::uint64_t(s) + 2 * T,
                    "inner partition s=" + std::to_string(s) + " T=" + std::to_string(T));
    for (std::uint32_t t = 2; t <= 4; ++t)
        for (std::uint32_t d = 1; d <= 3; ++d)
            for (std::uint32_t T = 1; T <= t - 1; ++T)
                c.equal(minimal_server_count({t, 1, d, T}), std::uint64_t(d + 1) * (t + T) - 1,
                        "outer partition t=" + std::to_string(t) + " d=" + std::to_string(d) +
                            " T=" + std::to_string(T));
}

void criterion3(const std::vector<GridPlan>& grid, Check& c) {
    std::mt19937_64 rng(20240817);
    for (const GridPlan& gp : grid) {
        const std::uint64_t q = gp.plan.field().modulus();
        const std::uint32_t t = gp.params.row_blocks;
        const std::uint32_t s = gp.params.inner_blocks;
        const std::uint32_t d = gp.params.col_blocks;
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t a_rows = t * (1 + rng() % (12 / t));
            const std::size_t inner = s * (1 + rng() % (12 / s));
            const std::size_t b_cols = d * (1 + rng() % (12 / d));
            const Matrix a = random_matrix(a_rows, inner, q, rng);
            const Matrix b = random_matrix(inner, b_cols, q, rng);

            UniformFieldRng mask_rng(rng());
            const ShareSet shares = encode(a, b, gp.plan, mask_rng);
            std::vector<Matrix> products;
            products.reserve(gp.plan.server_count());
            for (std::uint64_t i = 0; i < gp.plan.server_count(); ++i)
                products.push_back(
                    server_multiply(shares.share_a[i], shares.share_b[i], gp.plan.field()));
            if (!(decode(products, gp.plan) == schoolbook(a, b, q))) {
                c.require(false, "mismatch at t=" + std::to_string(t) + " s=" + std::to_string(s) +
                                     " d=" + std::to_string(d) +
                                     " T=" + std::to_string(gp.params.security) +
                                     (gp.minimal ? " (minimal)" : " (closed form)"));
                return;
            }
        }
    }
}

void criterion4(const std::vector<GridPlan>& grid, Check& c) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;  // (q, n)
    for (const GridPlan& gp : grid) {
        const std::uint64_t q = gp.plan.field().modulus();
        const std::uint64_t n = gp.plan.server_count();
        if (!seen.insert({q, n}).second)
            continue;
        const RootOfUnity& alpha = gp.plan.alpha();
        for (std::int64_t e = -2 * static_cast<std::int64_t>(n);
             e <= 2 * static_cast<std::int64_t>(n); ++e) {
            const std::uint64_t expected = e % static_cast<std::int64_t>(n) == 0 ? n % q : 0;
            if (power_sum(alpha, e).value() != expected) {
                c.require(false, "power sum off at q=" + std::to_string(q) +
                                     " n=" + std::to_string(n) + " e=" + std::to_string(e));
                return;
            }
        }
    }
}

void criterion5(Check& c) {
    const SchemePlan plan = make_plan({2, 2, 2, 1}, ServerCountChoice::minimal());
    c.equal(plan.server_count(), 13, "server count");
    c.equal(plan.alpha().normalize_exponent(plan.decode_exponent(1, 1)), 0, "weight (1,1)");
    c.equal(plan.alpha().normalize_exponent(plan.decode_exponent(1, 2)), 5, "weight (1,2)");
    c.equal(plan.alpha().normalize_exponent(plan.decode_exponent(2, 1)), 11, "weight (2,1)");
    c.equal(plan.alpha().normalize_exponent(plan.decode_exponent(2, 2)), 3, "weight (2,2)");
}

void criterion6(Check& c) {
    for (auto [a, b, c3] : std::vector<std::array<std::int64_t, 3>>{{4, 4, 4}, {8, 12, 4}}) {
        const auto rows = comparison_table(a, b, c3);
        c.equal(rows.size(), std::size_t(3), "row count");
        const Rational ab_bc(a * b + b * c3);
        const Rational ac(a * c3);

        c.require(rows[0].upload == Rational(13, 4) * ab_bc, "grid upload coefficient");
        c.require(rows[0].download == Rational(13, 4) * ac, "grid download coefficient");
        c.require(rows[0].encode == Rational(26) * ab_bc, "grid encode coefficient");
        c.require(rows[0].decode == Rational(23) * ac, "grid decode coefficient");

        c.require(rows[1].upload == Rational(7, 2) * ab_bc, "gasp upload coefficient");
        c.require(rows[1].download == Rational(7, 4) * ac, "gasp download coefficient");
        c.require(rows[1].encode == Rational(28) * ab_bc, "gasp encode coefficient");
        c.require(rows[1].decode == Rational(27) * ac, "gasp decode coefficient");

        c.require(rows[2].upload == Rational(3, 2) * ab_bc, "inner upload coefficient");
        c.require(rows[2].download == Rational(7) * ac, "inner download coefficient");
        c.require(rows[2].encode == Rational(12) * ab_bc, "inner encode coefficient");
        c.require(rows[2].decode == Rational(7) * ac, "inner decode coefficient");

        // the grid row must come out of the general formulas, not constants
        const CostReport formulas = communication_costs({2, 2, 2, 1}, 13, a, b, c3);
        c.require(rows[0].upload == formulas.upload_elements, "grid row vs formula upload");
        c.require(rows[0].download == formulas.download_elements, "grid row vs formula download");
        c.require(rows[0].encode == formulas.encode_ops, "grid row vs formula encode");
        c.require(rows[0].decode == formulas.decode_ops, "grid row vs formula decode");
    }
}

void criterion7(const std::vector<GridPlan>& grid, Check& c) {
    for (const GridPlan& gp : grid) {
        const std::uint64_t n = gp.plan.server_count();
        if (n > 20)
            continue;
        for (MaskSide side : {MaskSide::A, MaskSide::B}) {
            std::vector<std::uint32_t> idx(gp.params.security);
            for (std::uint32_t i = 0; i < gp.params.security; ++i)
                idx[i] = i + 1;
            do {
                if (!is_invertible(mask_matrix(gp.plan, idx, side), gp.plan.field())) {
                    c.require(false, "singular mask matrix, n=" + std::to_string(n));
                    return;
                }
            } while (next_combination(idx, static_cast<std::uint32_t>(n)));
        }
    }

    const SchemePlan tiny = make_plan({1, 1, 1, 1}, ServerCountChoice::explicit_count(4));
    c.equal(tiny.field().modulus(), 5, "inner 1x1 field");
    for (std::uint32_t i = 1; i <= 4; ++i)
        c.require(exhaustive_security_check(tiny, {i}),
                  "uniform view, single-block plan, server " + std::to_string(i));

    const SchemePlan small = make_plan({1, 2, 1, 1}, ServerCountChoice::minimal());
    c.equal(small.field().modulus(), 5, "inner 1x2 field");
    for (std::uint32_t i = 1; i <= 4; ++i)
        c.require(exhaustive_security_check(small, {i}),
                  "uniform view, two-block plan, server " + std::to_string(i));
}

void criterion8(Check& c) {
    const std::string cli = cli_path();
    if (cli.empty()) {
        c.require(false, "sdmm binary not found (set SDMM_CLI)");
        return;
    }

    // Remote/local equivalence for plans with 4, 8, and 13 servers.
    const std::vector<std::tuple<PartitionParams, std::size_t, std::size_t, std::size_t>> cases{
        {{1, 2, 1, 1}, 2, 4, 2},
        {{2, 1, 2, 1}, 4, 3, 4},
        {{2, 2, 2, 1}, 4, 4, 4},
    };
    const std::vector<std::uint64_t> expected_counts{4, 8, 13};
    std::mt19937_64 rng(4242);
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& [params, ar, inner, bc] = cases[k];
        const SchemePlan plan = make_plan(params, ServerCountChoice::minimal());
        c.equal(plan.server_count(), expected_counts[k], "plan server count");

        std::vector<WorkerProcess> workers;
        std::vector<WorkerEndpoint> endpoints;
        bool spawn_ok = true;
        for (std::uint64_t i = 0; i < plan.server_count(); ++i) {
            workers.push_back(spawn_worker(cli));
            spawn_ok = spawn_ok && workers.back().pid > 0 && workers.back().port != 0;
            endpoints.push_back({"127.0.0.1", workers.back().port});
        }
        if (!spawn_ok) {
            for (WorkerProcess& w : workers)
                kill_worker(w);
            c.require(false, "failed to spawn workers");
            return;
        }

        const std::uint64_t q = plan.field().modulus();
        const Matrix a = random_matrix(ar, inner, q, rng);
        const Matrix b = random_matrix(inner, bc, q, rng);
        const std::uint64_t seed = rng();
        UniformFieldRng rng_local(seed), rng_remote(seed);
        const RunResult local = run_local(a, b, plan, rng_local, 4);
        bool remote_ok = true;
        std::string remote_err;
        RunResult remote;
        try {
            remote = run_remote(a, b, plan, rng_remote, endpoints);
        } catch (const std::exception& e) {
            remote_ok = false;
            remote_err = e.what();
        }
        for (WorkerProcess& w : workers)
            kill_worker(w);
        c.require(remote_ok, "remote run failed: " + remote_err);
        if (!remote_ok)
            return;
        c.require(remote.product == local.product,
                  "remote product differs at n=" + std::to_string(plan.server_count()));
        c.require(remote.product == schoolbook(a, b, q), "remote product is wrong");
        c.require(logs_equivalent(local.log, remote.log),
                  "logs differ at n=" + std::to_string(plan.server_count()));
    }

    // Fuzz: 1000 malformed frames against one worker; only ERROR frames or
    // clean disconnects are acceptable, and the worker must stay up.
    WorkerProcess worker = spawn_worker(cli);
    if (worker.pid <= 0 || worker.port == 0) {
        c.require(false, "failed to spawn fuzz worker");
        return;
    }
    std::mt19937_64 fuzz(987654321);
    auto client = std::make_unique<RawClient>(worker.port);
    c.require(client->connected(), "fuzz client connect");
    int error_replies = 0, disconnects = 0;
    for (int i = 0; i < 1000; ++i) {
        if (!client->connected()) {
            client = std::make_unique<RawClient>(worker.port);
            if (!client->connected()) {
                c.require(false, "worker stopped accepting at frame " + std::to_string(i));
                break;
            }
        }
        const int kind = static_cast<int>(fuzz() % 10);
        std::vector<std::uint8_t> frame;
        bool expect_reply = true;
        if (kind < 7) {
            // complete frame, random payload
            const std::uint32_t len = static_cast<std::uint32_t>(fuzz() % 300);
            frame = {static_cast<std::uint8_t>(len), static_cast<std::uint8_t>(len >> 8),
                     static_cast<std::uint8_t>(len >> 16), static_cast<std::uint8_t>(len >> 24)};
            for (std::uint32_t j = 0; j < len; ++j)
                frame.push_back(static_cast<std::uint8_t>(fuzz()));
            if (kind == 0 && len >= 6) {
                // plant real magic/version to reach deeper parse paths
                frame[4] = 0x53; frame[5] = 0x44; frame[6] = 0x4d; frame[7] = 0x4d;
                frame[8] = 0x01;
            }
        } else if (kind < 9) {
            // truncated: claim more than we send, then drop the connection
            const std::uint32_t claimed = 32 + static_cast<std::uint32_t>(fuzz() % 1000);
            frame = {static_cast<std::uint8_t>(claimed), static_cast<std::uint8_t>(claimed >> 8),
                     static_cast<std::uint8_t>(claimed >> 16),
                     static_cast<std::uint8_t>(claimed >> 24)};
            const std::uint32_t actual = static_cast<std::uint32_t>(fuzz() % 16);
            for (std::uint32_t j = 0; j < actual; ++j)
                frame.push_back(static_cast<std::uint8_t>(fuzz()));
            expect_reply = false;
        } else {
            // oversized declared length
            const std::uint32_t huge = wire::kMaxPayloadBytes + 1 + static_cast<std::uint32_t>(fuzz() % 1000);
            frame = {static_cast<std::uint8_t>(huge), static_cast<std::uint8_t>(huge >> 8),
                     static_cast<std::uint8_t>(huge >> 16), static_cast<std::uint8_t>(huge >> 24)};
        }

        if (!client->send_bytes(frame)) {
            ++disconnects;
            client = std::make_unique<RawClient>(worker.port);
            continue;
        }
        if (!expect_reply) {
            ++disconnects;
            client = std::make_unique<RawClient>(worker.port);
            continue;
        }
        auto payload = client->read_payload();
        if (!payload) {
            ++disconnects;
            client = std::make_unique<RawClient>(worker.port);
            continue;
        }
        auto parsed = wire::parse_payload(*payload);
        const bool is_error = std::holds_alternative<wire::Message>(parsed) &&
                              std::holds_alternative<wire::ErrorMessage>(
                                  std::get<wire::Message>(parsed));
        if (!is_error) {
            c.require(false, "non-ERROR reply to garbage at frame " + std::to_string(i));
            break;
        }
        ++error_replies;
    }

    c.require(worker_alive(worker), "worker crashed during fuzzing");
    c.require(error_replies > 0, "fuzz never elicited an ERROR reply");
    c.require(disconnects > 0, "fuzz never exercised the disconnect path");

    // The worker must still answer a well-formed request.
    RawClient final_client(worker.port);
    c.require(final_client.connected(), "post-fuzz connect");
    final_client.send_bytes(wire::encode_compute({53, Matrix(1, 1, {3}), Matrix(1, 1, {4})}));
    auto payload = final_client.read_payload();
    c.require(payload.has_value(), "post-fuzz reply");
    if (payload) {
        auto parsed = wire::parse_payload(*payload);
        const auto* msg = std::get_if<wire::Message>(&parsed);
        c.require(msg != nullptr && std::holds_alternative<wire::ResultMessage>(*msg) &&
                      std::get<wire::ResultMessage>(*msg).product == Matrix(1, 1, {12}),
                  "post-fuzz product");
    }
    kill_worker(worker);
}

void criterion9(const std::vector<GridPlan>& grid, Check& c) {
    std::mt19937_64 rng(555);
    for (const GridPlan& gp : grid) {
        const std::int64_t t = gp.params.row_blocks;
        const std::int64_t s = gp.params.inner_blocks;
        const std::int64_t d = gp.params.col_blocks;
        const std::int64_t a = t * static_cast<std::int64_t>(1 + rng() % 6);
        const std::int64_t b = s * static_cast<std::int64_t>(1 + rng() % 6);
        const std::int64_t c3 = d * static_cast<std::int64_t>(1 + rng() % 6);
        const std::int64_t n = static_cast<std::int64_t>(gp.plan.server_count());
        const CostReport r = communication_costs(gp.params, gp.plan.server_count(), a, b, c3);

        // the closed form, written out independently
        const Rational closed =
            Rational(1) / (Rational(n) * (Rational(b, c3 * t * s) + Rational(b, a * s * d) +
                                          Rational(1, t * d)));
        if (!(r.total_rate == closed)) {
            c.require(false, "closed form mismatch");
            return;
        }
        if (!(r.total_rate * (r.upload_elements + r.download_elements) == Rational(a * c3))) {
            c.require(false, "rate vs traffic mismatch");
            return;
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        std::string label;
        double limit_seconds;  // 0 = no stated limit
        std::function<void(Check&)> run;
    };

    std::vector<GridPlan> grid;
    try {
        grid = build_grid_plans();
    } catch (const std::exception& e) {
        std::cout << "[FAIL] grid construction: " << e.what() << '\n';
        return 1;
    }

    const std::vector<Criterion> criteria{
        {1, "worked-example server counts", 1.0, criterion1},
        {2, "boundary-case minimal counts", 10.0, criterion2},
        {3, "end-to-end oracle equivalence", 60.0,
         [&](Check& c) { criterion3(grid, c); }},
        {4, "root-of-unity power-sum identity", 0.0,
         [&](Check& c) { criterion4(grid, c); }},
        {5, "decode-weight reproduction", 0.0, criterion5},
        {6, "comparison-table reproduction", 0.0, criterion6},
        {7, "mask ranks and exhaustive uniformity", 30.0,
         [&](Check& c) { criterion7(grid, c); }},
        {8, "worker harness equivalence and fuzz", 0.0, criterion8},
        {9, "communication-rate closed form", 0.0,
         [&](Check& c) { criterion9(grid, c); }},
    };

    bool all_pass = true;
    for (const Criterion& crit : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (crit.limit_seconds > 0 && seconds > crit.limit_seconds)
            check.require(false, "exceeded " + std::to_string(crit.limit_seconds) + "s limit");

        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.2fs", seconds);
        if (check.ok) {
            std::cout << "[PASS] criterion " << crit.number << ": " << crit.label << " (" << timing
                      << ")\n";
        } else {
            all_pass = false;
            std::cout << "[FAIL] criterion " << crit.number << ": " << crit.label << " (" << timing
                      << "): " << check.detail.str() << '\n';
        }
    }
    return all_pass ? 0 : 1;
}
