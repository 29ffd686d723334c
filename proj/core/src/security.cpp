#include "sdmm/scheme.hpp"

#include <map>
#include <stdexcept>
#include <unordered_set>

namespace sdmm {

namespace {

using u128 = unsigned __int128;

std::uint64_t eval_scalar_poly(const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms,
                               std::uint64_t server, const RootOfUnity& alpha,
                               const PrimeField& field) {
    std::uint64_t acc = 0;
    for (const auto& [value, exponent] : terms)
        acc = field.add(acc, field.mul(value, alpha.pow_at(server, exponent).value()));
    return acc;
}

}  // namespace

bool exhaustive_security_check(const SchemePlan& plan,
                               const std::vector<std::uint32_t>& colluding_servers,
                               std::uint64_t budget) {
    if (colluding_servers.empty())
        return true;
    std::unordered_set<std::uint32_t> seen;
    for (std::uint32_t idx : colluding_servers) {
        if (idx < 1 || idx > plan.server_count())
            throw std::invalid_argument("exhaustive_security_check: server index out of range");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("exhaustive_security_check: duplicate server index");
    }

    const PartitionParams& p = plan.params();
    const PrimeField& field = plan.field();
    const RootOfUnity& alpha = plan.alpha();
    const std::uint64_t q = field.modulus();

    // The audit instance uses one entry per block, so each side carries
    // exactly T scalar masks and q^T assignments enumerate the full space.
    u128 combos = 1;
    for (std::uint32_t k = 0; k < p.security; ++k) {
        combos *= q;
        if (combos > budget)
            throw BudgetExceededError("exhaustive_security_check: q^T exceeds enumeration budget");
    }

    u128 view_space = 1;
    bool view_space_overflows = false;
    for (std::size_t i = 0; i < colluding_servers.size(); ++i) {
        view_space *= q;
        if (view_space > combos) {
            view_space_overflows = true;  // more view tuples than mask draws: cannot be uniform
            break;
        }
    }

    const ExponentLayout& layout = plan.layout();
    auto side_is_secure = [&](MaskSide side) {
        std::vector<std::int64_t> block_exps, mask_exps;
        if (side == MaskSide::A) {
            for (std::uint32_t i = 1; i <= p.row_blocks; ++i)
                for (std::uint32_t j = 1; j <= p.inner_blocks; ++j)
                    block_exps.push_back(layout.a_block_exponent(i, j));
            for (std::uint32_t k = 1; k <= p.security; ++k)
                mask_exps.push_back(layout.a_mask_exponent(k));
        } else {
            for (std::uint32_t i = 1; i <= p.inner_blocks; ++i)
                for (std::uint32_t j = 1; j <= p.col_blocks; ++j)
                    block_exps.push_back(layout.b_block_exponent(i, j));
            for (std::uint32_t k = 1; k <= p.security; ++k)
                mask_exps.push_back(layout.b_mask_exponent(k));
        }

        // Two distinct fixed inputs; security means the colluding view's
        // distribution over the mask draws is identical for both.
        std::vector<std::vector<std::uint64_t>> inputs(2);
        inputs[0].assign(block_exps.size(), 0);
        for (std::size_t i = 0; i < block_exps.size(); ++i)
            inputs[1].push_back((i + 1) % q);

        std::map<std::vector<std::uint64_t>, std::uint64_t> histogram[2];
        for (int which = 0; which < 2; ++which) {
            std::vector<std::uint64_t> masks(p.security, 0);
            std::vector<std::pair<std::uint64_t, std::int64_t>> terms;
            while (true) {
                terms.clear();
                for (std::size_t i = 0; i < block_exps.size(); ++i)
                    terms.emplace_back(inputs[which][i], block_exps[i]);
                for (std::size_t k = 0; k < masks.size(); ++k)
                    terms.emplace_back(masks[k], mask_exps[k]);
                std::vector<std::uint64_t> view;
                view.reserve(colluding_servers.size());
                for (std::uint32_t idx : colluding_servers)
                    view.push_back(eval_scalar_poly(terms, idx, alpha, field));
                ++histogram[which][std::move(view)];

                // odometer over all mask assignments
                std::size_t pos = 0;
                while (pos < masks.size() && ++masks[pos] == q) {
                    masks[pos] = 0;
                    ++pos;
                }
                if (pos == masks.size())
                    break;
            }
        }

        if (view_space_overflows || histogram[0].size() != static_cast<std::uint64_t>(view_space))
            return false;  // view does not cover the full tuple space uniformly
        const std::uint64_t expected = static_cast<std::uint64_t>(combos / view_space);
        for (const auto& [view, count] : histogram[0])
            if (count != expected)
                return false;
        return histogram[0] == histogram[1];
    };

    return side_is_secure(MaskSide::A) && side_is_secure(MaskSide::B);
}

}  // namespace sdmm
