#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "sdmm/scheme.hpp"

namespace sdmm {

/// All cost accounting is exact rational arithmetic; nothing here may round.
using Rational = boost::rational<std::int64_t>;

/// "23" for integers, "4/39" otherwise.
std::string format_rational(const Rational& r);

/// Field-element and field-operation counts for one job.
struct CostReport {
    Rational upload_elements;    // N(ab/(ts) + bc/(sd))
    Rational download_elements;  // N ac/(td)
    Rational encode_ops;         // Horner evaluation of both polynomials at N points
    Rational decode_ops;         // weighted power sums for all td target blocks
    Rational total_rate;         // ac / (upload + download)
};

/// Cost report for multiplying an a x b by a b x c matrix with the given
/// partition and server count. Dimensions must be block-divisible.
CostReport communication_costs(const PartitionParams& params, std::uint64_t server_count,
                               std::int64_t a, std::int64_t b, std::int64_t c);

struct ComparisonRow {
    std::string scheme;
    Rational upload;
    Rational download;
    Rational encode;
    Rational decode;
};

/// The three-scheme comparison at partition (2,2,2) with one colluding
/// server and 13 servers: this scheme's row comes from the general cost
/// formulas; the gasp and inner-product rows are fixed reference constants
/// valid only for this configuration. Requires a, b, c divisible by 4.
std::vector<ComparisonRow> comparison_table(std::int64_t a, std::int64_t b, std::int64_t c);

std::string format_table_text(const std::vector<ComparisonRow>& rows);
std::string format_table_csv(const std::vector<ComparisonRow>& rows);

/// Whether outsourcing at partition (2,2,2), one colluding server, beats
/// local schoolbook multiplication for these dimensions, assuming unit cost
/// to transmit, add, or multiply one element.
struct SpeedupResult {
    bool satisfied;
    std::string reason;  // set when not satisfied

    explicit operator bool() const { return satisfied; }
};

SpeedupResult speedup_region(std::int64_t a, std::int64_t b, std::int64_t c);

}  // namespace sdmm
