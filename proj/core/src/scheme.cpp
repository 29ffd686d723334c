#include "sdmm/scheme.hpp"

#include <stdexcept>
#include <string>
#include <unordered_set>

namespace sdmm {

namespace {

// Exponent arithmetic stays in int64; this bound keeps every layout exponent
// (largest magnitude ~ d(ts+T) + T) far from overflow.
constexpr std::uint32_t kMaxParam = 1u << 16;

std::uint64_t residue(std::int64_t exponent, std::uint64_t n) {
    std::int64_t m = static_cast<std::int64_t>(n);
    std::int64_t r = exponent % m;
    if (r < 0)
        r += m;
    return static_cast<std::uint64_t>(r);
}

}  // namespace

PartitionParams::PartitionParams(std::uint32_t row_blocks_, std::uint32_t inner_blocks_,
                                 std::uint32_t col_blocks_, std::uint32_t security_)
    : row_blocks(row_blocks_), inner_blocks(inner_blocks_), col_blocks(col_blocks_),
      security(security_) {
    if (row_blocks < 1 || inner_blocks < 1 || col_blocks < 1)
        throw std::invalid_argument("PartitionParams: grid counts must be >= 1");
    if (security < 1)
        throw std::invalid_argument("PartitionParams: security must be >= 1");
    if (row_blocks > kMaxParam || inner_blocks > kMaxParam || col_blocks > kMaxParam ||
        security > kMaxParam)
        throw std::invalid_argument("PartitionParams: parameter exceeds supported range");
}

ExponentLayout::ExponentLayout(const PartitionParams& params)
    : params_(params),
      stride_(static_cast<std::int64_t>(params.row_blocks) * params.inner_blocks +
              params.security) {}

std::int64_t ExponentLayout::a_block_exponent(std::uint32_t i, std::uint32_t j) const {
    return static_cast<std::int64_t>(i - 1) * params_.inner_blocks + (j - 1);
}

std::int64_t ExponentLayout::a_mask_exponent(std::uint32_t k) const {
    return static_cast<std::int64_t>(params_.row_blocks) * params_.inner_blocks + (k - 1);
}

std::int64_t ExponentLayout::b_block_exponent(std::uint32_t i, std::uint32_t j) const {
    return (1 - static_cast<std::int64_t>(j)) * stride_ + (1 - static_cast<std::int64_t>(i));
}

std::int64_t ExponentLayout::b_mask_exponent(std::uint32_t k) const {
    return -static_cast<std::int64_t>(params_.col_blocks) * stride_ - (static_cast<std::int64_t>(k) - 1);
}

std::int64_t ExponentLayout::desired_exponent(std::uint32_t i, std::uint32_t j) const {
    return static_cast<std::int64_t>(i - 1) * params_.inner_blocks +
           (1 - static_cast<std::int64_t>(j)) * stride_;
}

std::vector<ExponentTerm> ExponentLayout::a_support() const {
    std::vector<ExponentTerm> terms;
    terms.reserve(static_cast<std::size_t>(params_.row_blocks) * params_.inner_blocks +
                  params_.security);
    for (std::uint32_t i = 1; i <= params_.row_blocks; ++i)
        for (std::uint32_t j = 1; j <= params_.inner_blocks; ++j)
            terms.push_back({a_block_exponent(i, j), false, i, j});
    for (std::uint32_t k = 1; k <= params_.security; ++k)
        terms.push_back({a_mask_exponent(k), true, k, 0});
    return terms;
}

std::vector<ExponentTerm> ExponentLayout::b_support() const {
    std::vector<ExponentTerm> terms;
    terms.reserve(static_cast<std::size_t>(params_.inner_blocks) * params_.col_blocks +
                  params_.security);
    for (std::uint32_t i = 1; i <= params_.inner_blocks; ++i)
        for (std::uint32_t j = 1; j <= params_.col_blocks; ++j)
            terms.push_back({b_block_exponent(i, j), false, i, j});
    for (std::uint32_t k = 1; k <= params_.security; ++k)
        terms.push_back({b_mask_exponent(k), true, k, 0});
    return terms;
}

ExponentLayout build_layout(const PartitionParams& params) {
    return ExponentLayout(params);
}

bool is_valid_server_count(const PartitionParams& params, std::uint64_t n) {
    if (n < 1)
        return false;
    const ExponentLayout layout(params);
    const std::vector<ExponentTerm> a_terms = layout.a_support();
    const std::vector<ExponentTerm> b_terms = layout.b_support();

    std::unordered_set<std::uint64_t> seen;
    for (const ExponentTerm& t : a_terms)
        seen.insert(residue(t.exponent, n));
    if (seen.size() != a_terms.size())
        return false;

    seen.clear();
    for (const ExponentTerm& t : b_terms)
        seen.insert(residue(t.exponent, n));
    if (seen.size() != b_terms.size())
        return false;

    std::unordered_set<std::uint64_t> desired;
    for (std::uint32_t i = 1; i <= params.row_blocks; ++i)
        for (std::uint32_t j = 1; j <= params.col_blocks; ++j)
            desired.insert(residue(layout.desired_exponent(i, j), n));
    if (desired.size() != static_cast<std::size_t>(params.row_blocks) * params.col_blocks)
        return false;

    // Every product pair is either one of the s block pairs feeding a target
    // block (same inner index on both sides) or interference; interference
    // residues must avoid every desired residue.
    for (const ExponentTerm& ta : a_terms) {
        for (const ExponentTerm& tb : b_terms) {
            const bool is_desired = !ta.mask && !tb.mask && ta.j == tb.i;
            if (is_desired)
                continue;
            if (desired.contains(residue(ta.exponent + tb.exponent, n)))
                return false;
        }
    }
    return true;
}

std::uint64_t guaranteed_server_count(const PartitionParams& params) {
    const std::uint64_t t = params.row_blocks;
    const std::uint64_t s = params.inner_blocks;
    const std::uint64_t d = params.col_blocks;
    const std::uint64_t sec = params.security;
    if (s == 1)
        return (d + 1) * (t + sec) - 1;
    return d * s * t + d * sec + t * s + sec;
}

std::uint64_t minimal_server_count(const PartitionParams& params) {
    const std::uint64_t upper = guaranteed_server_count(params);
    const std::uint64_t lower = static_cast<std::uint64_t>(params.row_blocks) * params.col_blocks;
    for (std::uint64_t n = lower; n <= upper; ++n) {
        if (is_valid_server_count(params, n))
            return n;
    }
    throw std::logic_error("minimal_server_count: no valid count up to the closed-form bound " +
                           std::to_string(upper) + "; validity check is inconsistent");
}

SchemePlan::SchemePlan(PartitionParams params, std::uint64_t server_count, PrimeField field,
                       RootOfUnity alpha)
    : params_(params), server_count_(server_count), field_(field), alpha_(alpha),
      layout_(params) {
    if (!is_valid_server_count(params_, server_count_))
        throw std::invalid_argument("SchemePlan: server count " + std::to_string(server_count_) +
                                    " fails the evaluation-point conditions");
    if (alpha_.order() != server_count_)
        throw std::invalid_argument("SchemePlan: root order does not match server count");
    if ((field_.modulus() - 1) % server_count_ != 0)
        throw std::invalid_argument("SchemePlan: server count does not divide q - 1");
}

std::int64_t SchemePlan::decode_exponent(std::uint32_t i, std::uint32_t j) const {
    return -layout_.desired_exponent(i, j);
}

SchemePlan make_plan(const PartitionParams& params, ServerCountChoice choice,
                     std::uint64_t min_modulus) {
    std::uint64_t n = 0;
    switch (choice.kind) {
    case ServerCountChoice::Kind::Minimal:
        n = minimal_server_count(params);
        break;
    case ServerCountChoice::Kind::Guaranteed:
        n = guaranteed_server_count(params);
        break;
    case ServerCountChoice::Kind::Explicit:
        n = choice.value;
        if (!is_valid_server_count(params, n))
            throw std::invalid_argument("make_plan: explicit server count " + std::to_string(n) +
                                        " fails the evaluation-point conditions");
        break;
    }
    PrimeField field(find_field_modulus(n, min_modulus));
    RootOfUnity alpha = nth_root_of_unity(field, n);
    return {params, n, field, alpha};
}

namespace {

struct ShareShapes {
    std::size_t a_rows, a_cols;  // a/t x b/s
    std::size_t b_rows, b_cols;  // b/s x c/d
};

ShareShapes check_encode_shapes(const Matrix& a, const Matrix& b, const SchemePlan& plan) {
    const PartitionParams& p = plan.params();
    if (a.cols() != b.rows())
        throw std::invalid_argument("encode: inner dimensions disagree (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
    if (a.rows() == 0 || a.cols() == 0 || b.cols() == 0)
        throw std::invalid_argument("encode: matrices must be non-empty");
    if (a.rows() % p.row_blocks != 0)
        throw std::invalid_argument("encode: rows of A (" + std::to_string(a.rows()) +
                                    ") not divisible by t (" + std::to_string(p.row_blocks) + ")");
    if (a.cols() % p.inner_blocks != 0)
        throw std::invalid_argument("encode: cols of A (" + std::to_string(a.cols()) +
                                    ") not divisible by s (" + std::to_string(p.inner_blocks) + ")");
    if (b.cols() % p.col_blocks != 0)
        throw std::invalid_argument("encode: cols of B (" + std::to_string(b.cols()) +
                                    ") not divisible by d (" + std::to_string(p.col_blocks) + ")");
    const std::uint64_t q = plan.field().modulus();
    for (std::uint64_t e : a.entries())
        if (e >= q)
            throw std::invalid_argument("encode: entry of A not reduced into the field");
    for (std::uint64_t e : b.entries())
        if (e >= q)
            throw std::invalid_argument("encode: entry of B not reduced into the field");
    return {a.rows() / p.row_blocks, a.cols() / p.inner_blocks,
            b.rows() / p.inner_blocks, b.cols() / p.col_blocks};
}

}  // namespace

ShareSet encode_with_masks(const Matrix& a, const Matrix& b, const SchemePlan& plan,
                           const std::vector<Matrix>& a_masks,
                           const std::vector<Matrix>& b_masks) {
    const PartitionParams& p = plan.params();
    const ShareShapes shapes = check_encode_shapes(a, b, plan);
    if (a_masks.size() != p.security || b_masks.size() != p.security)
        throw std::invalid_argument("encode: need exactly T masks per side");
    for (const Matrix& m : a_masks)
        if (m.rows() != shapes.a_rows || m.cols() != shapes.a_cols)
            throw std::invalid_argument("encode: A-side mask shape mismatch");
    for (const Matrix& m : b_masks)
        if (m.rows() != shapes.b_rows || m.cols() != shapes.b_cols)
            throw std::invalid_argument("encode: B-side mask shape mismatch");

    const BlockGrid a_grid = partition(a, p.row_blocks, p.inner_blocks);
    const BlockGrid b_grid = partition(b, p.inner_blocks, p.col_blocks);
    const ExponentLayout& layout = plan.layout();
    const RootOfUnity& alpha = plan.alpha();
    const PrimeField& field = plan.field();

    // Collect (coefficient, exponent) terms once; evaluation at each point is
    // then a plain linear combination.
    std::vector<std::pair<const Matrix*, std::int64_t>> a_terms, b_terms;
    for (std::uint32_t i = 1; i <= p.row_blocks; ++i)
        for (std::uint32_t j = 1; j <= p.inner_blocks; ++j)
            a_terms.emplace_back(&a_grid.block(i - 1, j - 1), layout.a_block_exponent(i, j));
    for (std::uint32_t k = 1; k <= p.security; ++k)
        a_terms.emplace_back(&a_masks[k - 1], layout.a_mask_exponent(k));
    for (std::uint32_t i = 1; i <= p.inner_blocks; ++i)
        for (std::uint32_t j = 1; j <= p.col_blocks; ++j)
            b_terms.emplace_back(&b_grid.block(i - 1, j - 1), layout.b_block_exponent(i, j));
    for (std::uint32_t k = 1; k <= p.security; ++k)
        b_terms.emplace_back(&b_masks[k - 1], layout.b_mask_exponent(k));

    ShareSet shares;
    shares.share_a.reserve(plan.server_count());
    shares.share_b.reserve(plan.server_count());
    for (std::uint64_t i = 1; i <= plan.server_count(); ++i) {
        Matrix sa(shapes.a_rows, shapes.a_cols);
        for (const auto& [coeff, exp] : a_terms)
            accumulate_scaled(sa, *coeff, alpha.pow_at(i, exp).value(), field);
        Matrix sb(shapes.b_rows, shapes.b_cols);
        for (const auto& [coeff, exp] : b_terms)
            accumulate_scaled(sb, *coeff, alpha.pow_at(i, exp).value(), field);
        shares.share_a.push_back(std::move(sa));
        shares.share_b.push_back(std::move(sb));
    }
    return shares;
}

ShareSet encode(const Matrix& a, const Matrix& b, const SchemePlan& plan, UniformFieldRng& rng) {
    const PartitionParams& p = plan.params();
    const ShareShapes shapes = check_encode_shapes(a, b, plan);
    std::vector<Matrix> a_masks, b_masks;
    a_masks.reserve(p.security);
    b_masks.reserve(p.security);
    for (std::uint32_t k = 0; k < p.security; ++k)
        a_masks.push_back(rng.draw_matrix(shapes.a_rows, shapes.a_cols, plan.field()));
    for (std::uint32_t k = 0; k < p.security; ++k)
        b_masks.push_back(rng.draw_matrix(shapes.b_rows, shapes.b_cols, plan.field()));
    return encode_with_masks(a, b, plan, a_masks, b_masks);
}

Matrix server_multiply(const Matrix& share_a, const Matrix& share_b, const PrimeField& field) {
    return multiply(share_a, share_b, field);
}

Matrix decode(const std::vector<Matrix>& products, const SchemePlan& plan) {
    const PartitionParams& p = plan.params();
    if (products.size() != plan.server_count())
        throw std::invalid_argument("decode: expected " + std::to_string(plan.server_count()) +
                                    " products, got " + std::to_string(products.size()));
    const std::size_t rows = products.front().rows();
    const std::size_t cols = products.front().cols();
    for (const Matrix& m : products)
        if (m.rows() != rows || m.cols() != cols)
            throw std::invalid_argument("decode: product shapes disagree");

    const PrimeField& field = plan.field();
    const RootOfUnity& alpha = plan.alpha();
    const std::uint64_t inv_n = field.inv(plan.server_count() % field.modulus());

    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(p.row_blocks) * p.col_blocks);
    for (std::uint32_t i = 1; i <= p.row_blocks; ++i) {
        for (std::uint32_t j = 1; j <= p.col_blocks; ++j) {
            const std::int64_t delta = plan.decode_exponent(i, j);
            Matrix acc(rows, cols);
            for (std::uint64_t n = 1; n <= plan.server_count(); ++n)
                accumulate_scaled(acc, products[n - 1], alpha.pow_at(n, delta).value(), field);
            blocks.push_back(scale(acc, inv_n, field));
        }
    }
    return reassemble(BlockGrid(p.row_blocks, p.col_blocks, std::move(blocks)));
}

Matrix mask_matrix(const SchemePlan& plan, const std::vector<std::uint32_t>& server_indices,
                   MaskSide side) {
    const PartitionParams& p = plan.params();
    if (server_indices.size() != p.security)
        throw std::invalid_argument("mask_matrix: need exactly T server indices");
    std::unordered_set<std::uint32_t> seen;
    for (std::uint32_t idx : server_indices) {
        if (idx < 1 || idx > plan.server_count())
            throw std::invalid_argument("mask_matrix: server index " + std::to_string(idx) +
                                        " out of range [1, " + std::to_string(plan.server_count()) + "]");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("mask_matrix: duplicate server index " + std::to_string(idx));
    }
    const ExponentLayout& layout = plan.layout();
    Matrix m(p.security, p.security);
    for (std::uint32_t k = 1; k <= p.security; ++k) {
        const std::int64_t e = side == MaskSide::A ? layout.a_mask_exponent(k)
                                                   : layout.b_mask_exponent(k);
        for (std::size_t j = 0; j < server_indices.size(); ++j)
            m(k - 1, j) = plan.alpha().pow_at(server_indices[j], e).value();
    }
    return m;
}

}  // namespace sdmm
