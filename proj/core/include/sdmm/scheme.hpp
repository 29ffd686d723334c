#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sdmm/field.hpp"
#include "sdmm/matrix.hpp"
#include "sdmm/rng.hpp"

namespace sdmm {

/// Grid-partition parameters: A splits into row_blocks x inner_blocks blocks,
/// B into inner_blocks x col_blocks, and up to `security` servers may collude.
struct PartitionParams {
    std::uint32_t row_blocks;    // t
    std::uint32_t inner_blocks;  // s
    std::uint32_t col_blocks;    // d
    std::uint32_t security;      // T >= 1

    PartitionParams(std::uint32_t row_blocks, std::uint32_t inner_blocks,
                    std::uint32_t col_blocks, std::uint32_t security);
};

/// One term of an encoding polynomial: its integer exponent plus the block or
/// mask it carries. Mask terms store the mask index in `i` with `j` = 0.
struct ExponentTerm {
    std::int64_t exponent;
    bool mask;
    std::uint32_t i;
    std::uint32_t j;
};

/// The exponent layouts of the two encoding polynomials and of the product
/// coefficients the decoder targets. All indices are 1-based as in the block
/// grids; exponents are plain integers (the polynomials are Laurent).
class ExponentLayout {
public:
    explicit ExponentLayout(const PartitionParams& params);

    const PartitionParams& params() const { return params_; }

    // i in [1, t], j in [1, s]
    std::int64_t a_block_exponent(std::uint32_t i, std::uint32_t j) const;
    // k in [1, T]
    std::int64_t a_mask_exponent(std::uint32_t k) const;
    // i in [1, s], j in [1, d]
    std::int64_t b_block_exponent(std::uint32_t i, std::uint32_t j) const;
    std::int64_t b_mask_exponent(std::uint32_t k) const;
    // Exponent of the product coefficient holding sum_l A(i,l) B(l,j).
    std::int64_t desired_exponent(std::uint32_t i, std::uint32_t j) const;

    /// All ts + T terms of the A-side polynomial.
    std::vector<ExponentTerm> a_support() const;
    /// All sd + T terms of the B-side polynomial.
    std::vector<ExponentTerm> b_support() const;

private:
    PartitionParams params_;
    std::int64_t stride_;  // ts + T, the block offset of the B-side layout
};

ExponentLayout build_layout(const PartitionParams& params);

/// Checks the four evaluation-point conditions for an order-n root of unity:
/// both supports and the desired exponents stay distinct mod n, and no
/// interference product (cross-block, block x mask, or mask x mask) lands on a
/// desired residue.
bool is_valid_server_count(const PartitionParams& params, std::uint64_t n);

/// Closed-form server count that always satisfies the validity conditions:
/// (d+1)(t+T) - 1 when s = 1, otherwise dst + dT + ts + T.
std::uint64_t guaranteed_server_count(const PartitionParams& params);

/// Smallest valid server count, searched upward from td. Throws
/// std::logic_error if nothing validates up to the closed-form bound (which
/// would mean the validity check itself is broken).
std::uint64_t minimal_server_count(const PartitionParams& params);

/// How to resolve the server count when building a plan.
struct ServerCountChoice {
    enum class Kind { Minimal, Guaranteed, Explicit };
    Kind kind = Kind::Minimal;
    std::uint64_t value = 0;

    static ServerCountChoice minimal() { return {Kind::Minimal, 0}; }
    static ServerCountChoice guaranteed() { return {Kind::Guaranteed, 0}; }
    static ServerCountChoice explicit_count(std::uint64_t n) { return {Kind::Explicit, n}; }
};

/// A fully resolved scheme instance: server count, field, evaluation root,
/// and exponent layout. Value type, safe to copy.
class SchemePlan {
public:
    SchemePlan(PartitionParams params, std::uint64_t server_count, PrimeField field,
               RootOfUnity alpha);

    const PartitionParams& params() const { return params_; }
    std::uint64_t server_count() const { return server_count_; }
    const PrimeField& field() const { return field_; }
    const RootOfUnity& alpha() const { return alpha_; }
    const ExponentLayout& layout() const { return layout_; }

    /// Decode weight exponent for target block (i, j): the negation of the
    /// desired exponent, so the weighted power sum isolates that coefficient.
    std::int64_t decode_exponent(std::uint32_t i, std::uint32_t j) const;

private:
    PartitionParams params_;
    std::uint64_t server_count_;
    PrimeField field_;
    RootOfUnity alpha_;
    ExponentLayout layout_;
};

/// Resolves the server count, finds the smallest prime q >= min_modulus with
/// n | q - 1, picks the canonical order-n root, and assembles the plan.
/// An explicit count must pass is_valid_server_count.
SchemePlan make_plan(const PartitionParams& params, ServerCountChoice choice,
                     std::uint64_t min_modulus = 2);

/// Per-server encoded payloads: share_a[i] and share_b[i] are the two
/// polynomial evaluations uploaded to server i + 1.
struct ShareSet {
    std::vector<Matrix> share_a;
    std::vector<Matrix> share_b;
};

/// Encodes A and B into one share pair per server, drawing the T masking
/// matrices per side from the RNG (A-side masks first, then B-side, each in
/// mask order, entries row-major). Requires block-divisible shapes and
/// entries already reduced into the plan's field.
ShareSet encode(const Matrix& a, const Matrix& b, const SchemePlan& plan, UniformFieldRng& rng);

/// Deterministic variant used by tests and by encode itself: the caller
/// supplies the T masks for each side.
ShareSet encode_with_masks(const Matrix& a, const Matrix& b, const SchemePlan& plan,
                           const std::vector<Matrix>& a_masks,
                           const std::vector<Matrix>& b_masks);

/// The per-server job: plain matrix product of the two shares.
Matrix server_multiply(const Matrix& share_a, const Matrix& share_b, const PrimeField& field);

/// Recovers AB exactly from all server products: each target block is the
/// weighted power sum (1/n) * sum_i (alpha^i)^delta * h(alpha^i).
Matrix decode(const std::vector<Matrix>& products, const SchemePlan& plan);

enum class MaskSide { A, B };

/// The T x T matrix of mask-term evaluations at the chosen servers; entry
/// (k, j) is (alpha^{i_j})^{e_k} for the k-th mask exponent. Security needs
/// it invertible for every T-subset of servers.
Matrix mask_matrix(const SchemePlan& plan, const std::vector<std::uint32_t>& server_indices,
                   MaskSide side);

/// Raised when an exhaustive enumeration would exceed its configured budget.
class BudgetExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Brute-force security audit on a 1-entry-per-block instance: enumerates all
/// mask assignments and verifies the colluding servers' joint view of each
/// encoding polynomial is uniform and identical for two distinct inputs.
/// Returns false when the views leak (e.g. for more than T colluders).
/// Throws BudgetExceededError when q^(mask entries) exceeds the budget.
bool exhaustive_security_check(const SchemePlan& plan,
                               const std::vector<std::uint32_t>& colluding_servers,
                               std::uint64_t budget = 2'000'000);

}  // namespace sdmm
