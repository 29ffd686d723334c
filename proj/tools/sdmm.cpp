// sdmm: plan, run, and audit secure distributed matrix multiplication over
// roots of unity. Subcommands: plan, multiply, costs, audit, serve.
//
// Exit codes: 0 success, 1 failed audit checks, 2 usage, 3 I/O or bind
// failure, 4 worker/protocol failure.

#include <algorithm>
#include <csignal>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sdmm/cost.hpp"
#include "sdmm/field.hpp"
#include "sdmm/harness.hpp"
#include "sdmm/matrix_io.hpp"
#include "sdmm/scheme.hpp"
#include "sdmm/server.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitWorker = 4;

struct CliError {
    int code;
    std::string message;
};

struct ParamFlags {
    std::uint32_t t = 1, s = 1, d = 1, T = 1;
    std::string n_choice = "minimal";
    std::uint64_t min_q = 2;

    sdmm::PartitionParams params() const { return {t, s, d, T}; }

    sdmm::ServerCountChoice choice() const {
        if (n_choice == "minimal")
            return sdmm::ServerCountChoice::minimal();
        if (n_choice == "theorem1")
            return sdmm::ServerCountChoice::guaranteed();
        try {
            std::size_t pos = 0;
            std::uint64_t n = std::stoull(n_choice, &pos);
            if (pos != n_choice.size())
                throw std::invalid_argument(n_choice);
            return sdmm::ServerCountChoice::explicit_count(n);
        } catch (const std::exception&) {
            throw CliError{kExitUsage, "--n must be minimal, theorem1, or a positive integer"};
        }
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags, bool with_n_choice) {
    cmd->add_option("--t", flags.t, "row blocks of A")->required();
    cmd->add_option("--s", flags.s, "column blocks of A = row blocks of B")->required();
    cmd->add_option("--d", flags.d, "column blocks of B")->required();
    cmd->add_option("--T", flags.T, "maximum number of colluding servers")->required();
    if (with_n_choice) {
        cmd->add_option("--n", flags.n_choice,
                        "server count: minimal (search), theorem1 (closed form), or an integer");
        cmd->add_option("--min-q", flags.min_q,
                        "lower bound for the field modulus; raise it above the largest "
                        "possible product entry for integer-exact results");
    }
}

std::string render_degree_table(const sdmm::ExponentLayout& layout) {
    const sdmm::PartitionParams& p = layout.params();
    std::vector<std::int64_t> a_exps, b_exps;
    for (const sdmm::ExponentTerm& t : layout.a_support())
        a_exps.push_back(t.exponent);
    for (const sdmm::ExponentTerm& t : layout.b_support())
        b_exps.push_back(t.exponent);
    std::sort(a_exps.begin(), a_exps.end());
    std::sort(b_exps.begin(), b_exps.end(), std::greater<>());

    std::set<std::int64_t> desired;
    for (std::uint32_t i = 1; i <= p.row_blocks; ++i)
        for (std::uint32_t j = 1; j <= p.col_blocks; ++j)
            desired.insert(layout.desired_exponent(i, j));

    std::size_t width = 1;
    auto cell = [&](std::int64_t v, bool starred) {
        std::string s = std::to_string(v);
        if (starred)
            s += '*';
        return s;
    };
    for (std::int64_t a : a_exps)
        for (std::int64_t b : b_exps)
            width = std::max(width, cell(a + b, desired.contains(a + b)).size());
    for (std::int64_t b : b_exps)
        width = std::max(width, std::to_string(b).size());

    std::ostringstream out;
    auto pad = [&](const std::string& s) {
        for (std::size_t i = s.size(); i < width; ++i)
            out << ' ';
        out << s;
    };
    pad("");
    for (std::int64_t a : a_exps) {
        out << "  ";
        pad(std::to_string(a));
    }
    out << '\n';
    for (std::int64_t b : b_exps) {
        pad(std::to_string(b));
        for (std::int64_t a : a_exps) {
            out << "  ";
            pad(cell(a + b, desired.contains(a + b)));
        }
        out << '\n';
    }
    return out.str();
}

int cmd_plan(const ParamFlags& flags) {
    const sdmm::PartitionParams params = flags.params();
    const std::uint64_t n_minimal = sdmm::minimal_server_count(params);
    const std::uint64_t n_guaranteed = sdmm::guaranteed_server_count(params);
    const sdmm::SchemePlan plan = sdmm::make_plan(params, flags.choice(), flags.min_q);

    const std::int64_t ts = std::int64_t(params.row_blocks) * params.inner_blocks;
    const std::int64_t sd = std::int64_t(params.inner_blocks) * params.col_blocks;
    const std::int64_t td = std::int64_t(params.row_blocks) * params.col_blocks;
    const sdmm::Rational rate =
        sdmm::Rational(1) / (sdmm::Rational(std::int64_t(plan.server_count())) *
                             (sdmm::Rational(1, ts) + sdmm::Rational(1, sd) + sdmm::Rational(1, td)));

    std::cout << "n_minimal=" << n_minimal << '\n'
              << "n_theorem1=" << n_guaranteed << '\n'
              << "n_selected=" << plan.server_count() << '\n'
              << "q=" << plan.field().modulus() << '\n'
              << "alpha=" << plan.alpha().value().value() << '\n'
              << "rate_symmetric_abc=" << sdmm::format_rational(rate) << '\n';
    std::cout << "degree_table (rows: f_B exponents, cols: f_A exponents, *: decoded products)\n"
              << render_degree_table(plan.layout());
    return 0;
}

struct MultiplyFlags {
    ParamFlags common;
    std::string a_file, b_file, out_file;
    std::string mode = "local";
    std::string workers_csv;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool pad = false;
};

std::vector<sdmm::WorkerEndpoint> parse_endpoints(const std::string& csv) {
    std::vector<sdmm::WorkerEndpoint> endpoints;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::size_t colon = item.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
            throw CliError{kExitUsage, "worker endpoint must be host:port, got \"" + item + "\""};
        int port = 0;
        try {
            port = std::stoi(item.substr(colon + 1));
        } catch (const std::exception&) {
            port = -1;
        }
        if (port < 1 || port > 65535)
            throw CliError{kExitUsage, "worker port out of range in \"" + item + "\""};
        endpoints.push_back({item.substr(0, colon), static_cast<std::uint16_t>(port)});
    }
    if (endpoints.empty())
        throw CliError{kExitUsage, "--workers must list at least one host:port"};
    return endpoints;
}

int cmd_multiply(MultiplyFlags& flags) {
    const sdmm::PartitionParams params = flags.common.params();
    const sdmm::ServerCountChoice choice = flags.common.choice();
    if (flags.mode != "local" && flags.mode != "remote")
        throw CliError{kExitUsage, "--mode must be local or remote"};

    sdmm::Matrix a, b;
    try {
        a = sdmm::read_matrix_file(flags.a_file);
        b = sdmm::read_matrix_file(flags.b_file);
    } catch (const std::invalid_argument& e) {
        throw CliError{kExitIo, e.what()};
    }

    if (a.cols() != b.rows())
        throw CliError{kExitUsage,
                       "inner dimensions disagree: A is " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + ", B is " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols())};

    const std::size_t out_rows = a.rows();
    const std::size_t out_cols = b.cols();
    if (flags.pad) {
        // Both inner dimensions are equal, so they pad to the same s-multiple
        // and the product stays well-formed; zero padding only adds zero
        // rows/columns, cropped away below.
        a = sdmm::pad_to_multiple(a, params.row_blocks, params.inner_blocks);
        b = sdmm::pad_to_multiple(b, params.inner_blocks, params.col_blocks);
        if (a.rows() != out_rows || a.cols() != b.rows() || b.cols() != out_cols)
            std::cerr << "note: padded to " << a.rows() << "x" << a.cols() << " * " << b.rows()
                      << "x" << b.cols() << "; result is cropped back to " << out_rows << "x"
                      << out_cols << '\n';
    } else if (a.rows() % params.row_blocks != 0 || a.cols() % params.inner_blocks != 0 ||
               b.cols() % params.col_blocks != 0) {
        throw CliError{kExitUsage,
                       "matrix shapes are not divisible by the block grid; pass --pad to zero-pad"};
    }

    if (!flags.seed_given) {
        std::random_device rd;
        flags.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    const sdmm::SchemePlan plan = sdmm::make_plan(params, choice, flags.common.min_q);

    std::size_t reduced = sdmm::reduce_entries(a, plan.field());
    reduced += sdmm::reduce_entries(b, plan.field());
    if (reduced > 0)
        std::cerr << "warning: " << reduced << " entries were >= q and were reduced mod q="
                  << plan.field().modulus()
                  << "; raise --min-q for integer-exact products\n";

    sdmm::UniformFieldRng rng(flags.seed);
    sdmm::RunResult run;
    if (flags.mode == "local") {
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        run = sdmm::run_local(a, b, plan, rng, workers);
    } else if (flags.mode == "remote") {
        std::vector<sdmm::WorkerEndpoint> endpoints = parse_endpoints(flags.workers_csv);
        if (endpoints.size() != plan.server_count())
            throw CliError{kExitUsage, "--workers lists " + std::to_string(endpoints.size()) +
                                           " endpoints but the plan needs " +
                                           std::to_string(plan.server_count())};
        try {
            run = sdmm::run_remote(a, b, plan, rng, endpoints);
        } catch (const sdmm::WorkerError& e) {
            throw CliError{kExitWorker, e.what()};
        }
    }

    sdmm::Matrix product = run.product;
    if (product.rows() != out_rows || product.cols() != out_cols)
        product = sdmm::crop(product, out_rows, out_cols);

    const std::size_t upload = plan.server_count() * (run.log.records[0].share_a.size() +
                                                      run.log.records[0].share_b.size());
    const std::size_t download = plan.server_count() * run.log.records[0].product.size();
    std::cerr << "n=" << plan.server_count() << " q=" << plan.field().modulus()
              << " seed=" << flags.seed << " upload_elements=" << upload
              << " download_elements=" << download << '\n';

    if (flags.out_file.empty()) {
        sdmm::write_matrix_text(std::cout, product);
    } else {
        std::ofstream out(flags.out_file);
        if (!out)
            throw CliError{kExitIo, "cannot open output file: " + flags.out_file};
        sdmm::write_matrix_text(out, product);
    }
    return 0;
}

struct CostFlags {
    ParamFlags common;
    std::int64_t a = 0, b = 0, c = 0;
    bool compare = false;
    std::string format = "text";
};

int cmd_costs(const CostFlags& flags) {
    const sdmm::PartitionParams params = flags.common.params();
    if (flags.compare &&
        !(params.row_blocks == 2 && params.inner_blocks == 2 && params.col_blocks == 2 &&
          params.security == 1))
        throw CliError{kExitUsage,
                       "--compare is only meaningful at --t 2 --s 2 --d 2 --T 1; the baseline "
                       "entries are constants for that configuration"};

    std::uint64_t n = 0;
    switch (flags.common.choice().kind) {
    case sdmm::ServerCountChoice::Kind::Minimal:
        n = sdmm::minimal_server_count(params);
        break;
    case sdmm::ServerCountChoice::Kind::Guaranteed:
        n = sdmm::guaranteed_server_count(params);
        break;
    case sdmm::ServerCountChoice::Kind::Explicit:
        n = flags.common.choice().value;
        if (!sdmm::is_valid_server_count(params, n))
            throw CliError{kExitUsage, "explicit --n fails the evaluation-point conditions"};
        break;
    }

    const sdmm::CostReport report = sdmm::communication_costs(params, n, flags.a, flags.b, flags.c);
    std::cout << "n=" << n << '\n'
              << "upload_elements=" << sdmm::format_rational(report.upload_elements) << '\n'
              << "download_elements=" << sdmm::format_rational(report.download_elements) << '\n'
              << "encode_ops=" << sdmm::format_rational(report.encode_ops) << '\n'
              << "decode_ops=" << sdmm::format_rational(report.decode_ops) << '\n'
              << "total_rate=" << sdmm::format_rational(report.total_rate) << '\n';

    if (flags.compare) {
        const auto rows = sdmm::comparison_table(flags.a, flags.b, flags.c);
        std::cout << (flags.format == "csv" ? sdmm::format_table_csv(rows)
                                            : sdmm::format_table_text(rows));
    }
    return 0;
}

struct AuditFlags {
    ParamFlags common;
    std::uint64_t q = 0;
    std::int32_t collude = -1;
    std::uint64_t budget = 2'000'000;
};

bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
    // idx is a k-subset of [1, n] in increasing order
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

int cmd_audit(const AuditFlags& flags) {
    const sdmm::PartitionParams params = flags.common.params();

    std::uint64_t n = 0;
    switch (flags.common.choice().kind) {
    case sdmm::ServerCountChoice::Kind::Minimal:
        n = sdmm::minimal_server_count(params);
        break;
    case sdmm::ServerCountChoice::Kind::Guaranteed:
        n = sdmm::guaranteed_server_count(params);
        break;
    case sdmm::ServerCountChoice::Kind::Explicit:
        n = flags.common.choice().value;
        break;
    }

    sdmm::SchemePlan plan = [&] {
        if (flags.q != 0) {
            sdmm::PrimeField field(flags.q);
            return sdmm::SchemePlan(params, n, field, sdmm::nth_root_of_unity(field, n));
        }
        return sdmm::make_plan(params, sdmm::ServerCountChoice::explicit_count(n),
                               flags.common.min_q);
    }();

    bool all_pass = true;

    // Mask matrices for every T-subset of servers must be invertible.
    for (sdmm::MaskSide side : {sdmm::MaskSide::A, sdmm::MaskSide::B}) {
        std::uint64_t subsets = 0, failures = 0;
        std::vector<std::uint32_t> idx(params.security);
        for (std::uint32_t i = 0; i < params.security; ++i)
            idx[i] = i + 1;
        do {
            ++subsets;
            if (!sdmm::is_invertible(sdmm::mask_matrix(plan, idx, side), plan.field()))
                ++failures;
        } while (next_combination(idx, static_cast<std::uint32_t>(plan.server_count())));
        const char side_name = side == sdmm::MaskSide::A ? 'A' : 'B';
        std::cout << "check=mask_rank side=" << side_name << " subsets=" << subsets << " "
                  << (failures == 0 ? "pass" : "FAIL") << '\n';
        all_pass = all_pass && failures == 0;
    }

    // Exhaustive view-uniformity audit over every collusion set of the
    // requested size, when the enumeration budget allows.
    const std::uint32_t collude =
        flags.collude < 0 ? params.security : static_cast<std::uint32_t>(flags.collude);
    if (collude == 0) {
        std::cout << "check=exhaustive_uniformity colluders=0 pass\n";
    } else if (collude > plan.server_count()) {
        throw CliError{kExitUsage, "--collude exceeds the server count"};
    } else {
        try {
            std::uint64_t subsets = 0, failures = 0;
            std::vector<std::uint32_t> idx(collude);
            for (std::uint32_t i = 0; i < collude; ++i)
                idx[i] = i + 1;
            do {
                ++subsets;
                if (!sdmm::exhaustive_security_check(plan, idx, flags.budget))
                    ++failures;
            } while (next_combination(idx, static_cast<std::uint32_t>(plan.server_count())));
            std::cout << "check=exhaustive_uniformity colluders=" << collude
                      << " subsets=" << subsets << " " << (failures == 0 ? "pass" : "FAIL")
                      << '\n';
            all_pass = all_pass && failures == 0;
        } catch (const sdmm::BudgetExceededError&) {
            std::cerr << "notice: exhaustive check skipped, q^T exceeds budget "
                      << flags.budget << "; rank checks still apply\n";
            std::cout << "check=exhaustive_uniformity colluders=" << collude << " skipped\n";
        }
    }

    std::cout << "overall=" << (all_pass ? "pass" : "FAIL") << '\n';
    return all_pass ? 0 : kExitChecksFailed;
}

sdmm::WorkerServer* g_server = nullptr;

void handle_signal(int) {
    if (g_server != nullptr)
        g_server->request_stop();
}

int cmd_serve(std::uint16_t port) {
    sdmm::WorkerServer server(port);
    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cout << server.port() << std::endl;  // announce the bound port
    sdmm::serve(server);
    server.stop();
    g_server = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure distributed matrix multiplication over roots of unity"};
    app.require_subcommand(1);

    ParamFlags plan_flags;
    CLI::App* plan = app.add_subcommand("plan", "resolve a scheme: server count, field, layout");
    add_param_flags(plan, plan_flags, true);

    MultiplyFlags mul_flags;
    CLI::App* multiply = app.add_subcommand("multiply", "multiply two matrix files");
    add_param_flags(multiply, mul_flags.common, true);
    multiply->add_option("--a-file", mul_flags.a_file, "left matrix file")->required();
    multiply->add_option("--b-file", mul_flags.b_file, "right matrix file")->required();
    multiply->add_option("--mode", mul_flags.mode, "local or remote");
    multiply->add_option("--workers", mul_flags.workers_csv,
                         "comma-separated host:port worker endpoints (remote mode)");
    auto* seed_opt = multiply->add_option("--seed", mul_flags.seed, "RNG seed for the masks");
    multiply->add_flag("--pad", mul_flags.pad, "zero-pad shapes up to block-divisible sizes");
    multiply->add_option("--out", mul_flags.out_file, "write the product here instead of stdout");

    CostFlags cost_flags;
    CLI::App* costs = app.add_subcommand("costs", "communication and computation accounting");
    add_param_flags(costs, cost_flags.common, true);
    costs->add_option("--a", cost_flags.a, "rows of A")->required();
    costs->add_option("--b", cost_flags.b, "cols of A = rows of B")->required();
    costs->add_option("--c", cost_flags.c, "cols of B")->required();
    costs->add_flag("--compare", cost_flags.compare,
                    "emit the three-scheme comparison table (only at --t 2 --s 2 --d 2 --T 1)");
    costs->add_option("--format", cost_flags.format, "table format: text or csv");

    AuditFlags audit_flags;
    CLI::App* audit = app.add_subcommand("audit", "security checks: mask ranks and view uniformity");
    add_param_flags(audit, audit_flags.common, true);
    audit->add_option("--q", audit_flags.q, "explicit field modulus (default: smallest fitting prime)");
    audit->add_option("--collude", audit_flags.collude, "collusion set size to audit (default T)");
    audit->add_option("--budget", audit_flags.budget, "enumeration budget for the exhaustive check");

    std::uint16_t serve_port = 0;
    CLI::App* serve_cmd = app.add_subcommand("serve", "run a TCP worker");
    serve_cmd->add_option("--port", serve_port, "port to bind (0 picks a free one)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (plan->parsed())
            return cmd_plan(plan_flags);
        if (multiply->parsed()) {
            mul_flags.seed_given = seed_opt->count() > 0;
            return cmd_multiply(mul_flags);
        }
        if (costs->parsed())
            return cmd_costs(cost_flags);
        if (audit->parsed())
            return cmd_audit(audit_flags);
        if (serve_cmd->parsed()) {
            try {
                return cmd_serve(serve_port);
            } catch (const std::runtime_error& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitIo;
            }
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
