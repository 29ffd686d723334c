#pragma once

#include <cstdint>
#include <vector>

namespace sdmm {

/// Deterministic Miller-Rabin primality test, exact for the full 64-bit range.
bool is_prime(std::uint64_t n);

/// Distinct prime factors of n in ascending order (Pollard rho backed).
/// n = 0 or 1 yields an empty list.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

/// The prime field F_q for a 64-bit prime modulus q.
///
/// Immutable value type: the modulus is verified prime once at construction,
/// copies are trivial. All element arguments and results are canonical
/// residues in [0, q); multiplication reduces through a 128-bit intermediate.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t modulus);

    std::uint64_t modulus() const { return modulus_; }

    std::uint64_t reduce(std::uint64_t raw) const { return raw % modulus_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t neg(std::uint64_t a) const;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t pow(std::uint64_t base, std::uint64_t exponent) const;
    /// Multiplicative inverse; throws std::domain_error for a = 0.
    std::uint64_t inv(std::uint64_t a) const;

    bool operator==(const PrimeField&) const = default;

private:
    std::uint64_t modulus_;
};

/// A residue bundled with its field. Mixing elements of different fields
/// throws std::invalid_argument.
class FieldElement {
public:
    FieldElement(std::uint64_t value, const PrimeField& field);

    std::uint64_t value() const { return value_; }
    const PrimeField& field() const { return field_; }

    FieldElement operator+(const FieldElement& rhs) const;
    FieldElement operator-(const FieldElement& rhs) const;
    FieldElement operator*(const FieldElement& rhs) const;
    FieldElement operator-() const;
    FieldElement pow(std::uint64_t exponent) const;
    FieldElement inverse() const;

    bool operator==(const FieldElement&) const = default;

private:
    std::uint64_t value_;
    PrimeField field_;
};

/// An element of multiplicative order exactly `order`; construction verifies
/// alpha^order = 1 and alpha^(order/p) != 1 for every prime p | order.
class RootOfUnity {
public:
    RootOfUnity(FieldElement alpha, std::uint64_t order);

    const FieldElement& value() const { return alpha_; }
    std::uint64_t order() const { return order_; }
    const PrimeField& field() const { return alpha_.field(); }

    /// Maps a (possibly negative) exponent into [0, order).
    std::uint64_t normalize_exponent(std::int64_t exponent) const;

    /// alpha^exponent with the exponent reduced mod order first.
    FieldElement pow(std::int64_t exponent) const;

    /// (alpha^point)^exponent computed as alpha^(point * exponent mod order).
    FieldElement pow_at(std::uint64_t point, std::int64_t exponent) const;

private:
    FieldElement alpha_;
    std::uint64_t order_;
};

/// Smallest prime q >= lower_bound with q = 1 (mod n). Requires n >= 1 and
/// lower_bound >= 2; throws std::overflow_error if the search leaves the
/// 64-bit range.
std::uint64_t find_field_modulus(std::uint64_t n, std::uint64_t lower_bound);

/// Smallest element of multiplicative order exactly n in F_q. Requires
/// n | q - 1. Found via a generator g of the multiplicative group (tested
/// against the prime factors of q - 1), then canonicalized to the smallest
/// among the primitive powers of g^((q-1)/n).
RootOfUnity nth_root_of_unity(const PrimeField& field, std::uint64_t n);

/// Direct sum over all n points: sum_{i=1..n} (alpha^i)^exponent.
/// Equals n mod q when n | exponent and 0 otherwise.
FieldElement power_sum(const RootOfUnity& alpha, std::int64_t exponent);

}  // namespace sdmm
