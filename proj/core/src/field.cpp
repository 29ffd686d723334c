#include "sdmm/field.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sdmm {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
    std::uint64_t x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1)
        return false;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1)
            return false;
    }
    return true;  // composite witness
}

std::uint64_t pollard_rho(std::uint64_t n) {
    if (n % 2 == 0)
        return 2;
    std::uint64_t x = 2, y = 2, c = 1, d = 1;
    auto step = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    while (true) {
        x = 2;
        y = 2;
        d = 1;
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            std::uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) {
                d = n;
                break;
            }
            d = std::gcd(diff, n);
        }
        if (d != n)
            return d;
        ++c;  // cycle hit a self-collision; retry with another polynomial
    }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n < 2)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    // This witness set is deterministic for all 64-bit integers.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (miller_rabin_witness(n, a, d, r))
            return false;
    }
    return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> factors;
    // Strip small factors first so rho only sees hard composites.
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n % p == 0) {
            factors.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    }
    factor_into(n, factors);
    std::sort(factors.begin(), factors.end());
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
    return factors;
}

PrimeField::PrimeField(std::uint64_t modulus) : modulus_(modulus) {
    if (!is_prime(modulus))
        throw std::invalid_argument("PrimeField: modulus " + std::to_string(modulus) + " is not prime");
}

std::uint64_t PrimeField::add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;  // a, b < q <= 2^63-ish keeps this from wrapping
    if (s >= modulus_ || s < a)
        s -= modulus_;
    return s;
}

std::uint64_t PrimeField::sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : modulus_ - (b - a);
}

std::uint64_t PrimeField::neg(std::uint64_t a) const {
    return a == 0 ? 0 : modulus_ - a;
}

std::uint64_t PrimeField::mul(std::uint64_t a, std::uint64_t b) const {
    return mulmod(a, b, modulus_);
}

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t exponent) const {
    return powmod(base, exponent, modulus_);
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a == 0)
        throw std::domain_error("PrimeField: zero has no inverse");
    return powmod(a, modulus_ - 2, modulus_);
}

FieldElement::FieldElement(std::uint64_t value, const PrimeField& field)
    : value_(value), field_(field) {
    if (value_ >= field_.modulus())
        throw std::invalid_argument("FieldElement: value not a canonical residue");
}

namespace {
void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field() != b.field())
        throw std::invalid_argument("FieldElement: operands belong to different fields");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
    require_same_field(*this, rhs);
    return {field_.add(value_, rhs.value_), field_};
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
    require_same_field(*this, rhs);
    return {field_.sub(value_, rhs.value_), field_};
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
    require_same_field(*this, rhs);
    return {field_.mul(value_, rhs.value_), field_};
}

FieldElement FieldElement::operator-() const {
    return {field_.neg(value_), field_};
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
    return {field_.pow(value_, exponent), field_};
}

FieldElement FieldElement::inverse() const {
    return {field_.inv(value_), field_};
}

RootOfUnity::RootOfUnity(FieldElement alpha, std::uint64_t order)
    : alpha_(alpha), order_(order) {
    if (order == 0)
        throw std::invalid_argument("RootOfUnity: order must be positive");
    const PrimeField& f = alpha_.field();
    if (f.pow(alpha_.value(), order) != 1)
        throw std::invalid_argument("RootOfUnity: alpha^order != 1");
    for (std::uint64_t p : distinct_prime_factors(order)) {
        if (f.pow(alpha_.value(), order / p) == 1)
            throw std::invalid_argument("RootOfUnity: order of alpha divides " +
                                        std::to_string(order / p));
    }
}

std::uint64_t RootOfUnity::normalize_exponent(std::int64_t exponent) const {
    std::int64_t n = static_cast<std::int64_t>(order_);
    std::int64_t r = exponent % n;
    if (r < 0)
        r += n;
    return static_cast<std::uint64_t>(r);
}

FieldElement RootOfUnity::pow(std::int64_t exponent) const {
    return alpha_.pow(normalize_exponent(exponent));
}

FieldElement RootOfUnity::pow_at(std::uint64_t point, std::int64_t exponent) const {
    std::uint64_t e = normalize_exponent(exponent);
    std::uint64_t combined = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(point % order_) * e % order_);
    return alpha_.pow(combined);
}

std::uint64_t find_field_modulus(std::uint64_t n, std::uint64_t lower_bound) {
    if (n < 1)
        throw std::invalid_argument("find_field_modulus: n must be >= 1");
    if (lower_bound < 2)
        throw std::invalid_argument("find_field_modulus: lower_bound must be >= 2");
    std::uint64_t step = n == 1 ? 1 : n;
    std::uint64_t candidate = lower_bound;
    if (n > 1) {
        std::uint64_t r = candidate % n;
        if (r != 1) {
            std::uint64_t bump = (1 + n - r) % n;
            if (candidate > UINT64_MAX - bump)
                throw std::overflow_error("find_field_modulus: search exceeds 64-bit range");
            candidate += bump;
        }
    }
    while (true) {
        if (candidate >= 2 && is_prime(candidate))
            return candidate;
        if (candidate > UINT64_MAX - step)
            throw std::overflow_error("find_field_modulus: search exceeds 64-bit range");
        candidate += step;
    }
}

RootOfUnity nth_root_of_unity(const PrimeField& field, std::uint64_t n) {
    const std::uint64_t q = field.modulus();
    if (n == 0 || (q - 1) % n != 0)
        throw std::invalid_argument("nth_root_of_unity: " + std::to_string(n) +
                                    " does not divide q - 1 = " + std::to_string(q - 1));
    if (n == 1)
        return {FieldElement(1, field), 1};

    std::vector<std::uint64_t> group_factors = distinct_prime_factors(q - 1);
    std::uint64_t generator = 0;
    for (std::uint64_t g = 2; g < q; ++g) {
        bool primitive = true;
        for (std::uint64_t p : group_factors) {
            if (field.pow(g, (q - 1) / p) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            generator = g;
            break;
        }
    }

    std::uint64_t base = field.pow(generator, (q - 1) / n);
    // Every primitive n-th root is base^j with gcd(j, n) = 1; return the
    // smallest so the choice is deterministic across implementations.
    std::uint64_t best = base;
    for (std::uint64_t j = 1; j <= n; ++j) {
        if (std::gcd(j, n) != 1)
            continue;
        std::uint64_t cand = field.pow(base, j);
        best = std::min(best, cand);
    }
    return {FieldElement(best, field), n};
}

FieldElement power_sum(const RootOfUnity& alpha, std::int64_t exponent) {
    const PrimeField& f = alpha.field();
    FieldElement beta = alpha.pow(exponent);
    FieldElement acc(0, f);
    FieldElement term(1, f);
    for (std::uint64_t i = 0; i < alpha.order(); ++i) {
        term = term * beta;
        acc = acc + term;
    }
    return acc;
}

}  // namespace sdmm
