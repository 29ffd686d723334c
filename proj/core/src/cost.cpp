#include "sdmm/cost.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sdmm {

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

CostReport communication_costs(const PartitionParams& params, std::uint64_t server_count,
                               std::int64_t a, std::int64_t b, std::int64_t c) {
    const std::int64_t t = params.row_blocks;
    const std::int64_t s = params.inner_blocks;
    const std::int64_t d = params.col_blocks;
    const std::int64_t sec = params.security;
    if (a < 1 || b < 1 || c < 1)
        throw std::invalid_argument("communication_costs: dimensions must be positive");
    if (a % t != 0)
        throw std::invalid_argument("communication_costs: a not divisible by t");
    if (b % s != 0)
        throw std::invalid_argument("communication_costs: b not divisible by s");
    if (c % d != 0)
        throw std::invalid_argument("communication_costs: c not divisible by d");
    if (server_count < 1)
        throw std::invalid_argument("communication_costs: server count must be positive");

    const Rational n(static_cast<std::int64_t>(server_count));
    const Rational ab(a * b), bc(b * c), ac(a * c);
    const Rational ts(t * s), sd(s * d), td(t * d);

    CostReport report;
    report.upload_elements = n * (ab / ts + bc / sd);
    report.download_elements = n * ac / td;
    // Horner evaluation: ts + T coefficients on the A side cost 2(ts+T-1)
    // operations per entry, likewise sd + T on the B side.
    report.encode_ops = n * (Rational(2) * (ts + sec - 1) * ab / ts +
                             Rational(2) * (sd + sec - 1) * bc / sd);
    // Each of the td target blocks is a weighted sum of N products; the
    // zero-exponent weight needs no scalar multiplication.
    report.decode_ops = (td - 1) * Rational(2) * n * ac / td + (n + 1) * ac / td;
    report.total_rate = Rational(1) /
                        (n * (Rational(b) / (Rational(c) * ts) + Rational(b) / (Rational(a) * sd) +
                              Rational(1) / td));
    return report;
}

std::vector<ComparisonRow> comparison_table(std::int64_t a, std::int64_t b, std::int64_t c) {
    if (a < 4 || b < 4 || c < 4 || a % 4 != 0 || b % 4 != 0 || c % 4 != 0)
        throw std::invalid_argument("comparison_table: a, b, c must be positive multiples of 4");

    const PartitionParams params(2, 2, 2, 1);
    const CostReport grid = communication_costs(params, 13, a, b, c);

    const Rational ab_bc(a * b + b * c);
    const Rational ac(a * c);
    std::vector<ComparisonRow> rows;
    rows.push_back({"grid", grid.upload_elements, grid.download_elements, grid.encode_ops,
                    grid.decode_ops});
    // Reference constants for the same per-server work budget; valid only at
    // this configuration.
    rows.push_back({"gasp", Rational(7, 2) * ab_bc, Rational(7, 4) * ac, Rational(28) * ab_bc,
                    Rational(27) * ac});
    rows.push_back({"inner_product", Rational(3, 2) * ab_bc, Rational(7) * ac,
                    Rational(12) * ab_bc, Rational(7) * ac});
    return rows;
}

std::string format_table_text(const std::vector<ComparisonRow>& rows) {
    const std::vector<std::string> headers{"scheme", "upload", "download", "encode", "decode"};
    std::vector<std::vector<std::string>> cells;
    cells.push_back(headers);
    for (const ComparisonRow& r : rows)
        cells.push_back({r.scheme, format_rational(r.upload), format_rational(r.download),
                         format_rational(r.encode), format_rational(r.decode)});

    std::vector<std::size_t> widths(headers.size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());

    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0)
                out << "  ";
            out << row[i];
            for (std::size_t pad = row[i].size(); pad < widths[i]; ++pad)
                out << ' ';
        }
        out << '\n';
    }
    return out.str();
}

std::string format_table_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "scheme,upload,download,encode,decode\n";
    for (const ComparisonRow& r : rows)
        out << r.scheme << ',' << format_rational(r.upload) << ',' << format_rational(r.download)
            << ',' << format_rational(r.encode) << ',' << format_rational(r.decode) << '\n';
    return out.str();
}

SpeedupResult speedup_region(std::int64_t a, std::int64_t b, std::int64_t c) {
    if (a < 1 || b < 1 || c < 1)
        throw std::invalid_argument("speedup_region: dimensions must be positive");
    using i128 = __int128;
    // a > 234/7
    if (i128(7) * a <= 234)
        return {false, "a must exceed 234/7"};
    // b > 216a / (7a - 234); the denominator is positive once a passes
    const i128 b_den = i128(7) * a - 234;
    if (i128(b) * b_den <= i128(216) * a)
        return {false, "b must exceed 216a/(7a-234)"};
    // c > 234ab / (7ab - 216a - 234b)
    const i128 c_den = i128(7) * a * b - i128(216) * a - i128(234) * b;
    if (c_den <= 0)
        return {false, "7ab - 216a - 234b must be positive"};
    if (i128(c) * c_den <= i128(234) * a * b)
        return {false, "c must exceed 234ab/(7ab-216a-234b)"};
    return {true, ""};
}

}  // namespace sdmm
