#include "orbitledger/field.hpp"

#include <algorithm>
#include <string>

#include "orbitledger/errors.hpp"

namespace orbitledger::math {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) acc = mulmod(acc, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return acc;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    // Deterministic Miller-Rabin for 64-bit inputs with the base set above.
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t order) : q_(order) {
    if (order >= (1ULL << 62)) {
        throw GroupSetupError("field order must be below 2^62, got " + std::to_string(order));
    }
    if (!is_prime_u64(order)) {
        throw GroupSetupError("field order must be prime, got " + std::to_string(order));
    }
}

Scalar PrimeField::from_signed(std::int64_t v) const {
    const std::int64_t m = static_cast<std::int64_t>(q_);
    std::int64_t r = v % m;
    if (r < 0) r += m;
    return {static_cast<std::uint64_t>(r)};
}

Scalar PrimeField::add(Scalar a, Scalar b) const {
    std::uint64_t s = a.value + b.value; // no overflow: both < 2^62
    if (s >= q_) s -= q_;
    return {s};
}

Scalar PrimeField::sub(Scalar a, Scalar b) const {
    return a.value >= b.value ? Scalar{a.value - b.value} : Scalar{q_ - b.value + a.value};
}

Scalar PrimeField::mul(Scalar a, Scalar b) const { return {mulmod(a.value, b.value, q_)}; }

Scalar PrimeField::pow(Scalar base, std::uint64_t exp) const { return {powmod(base.value, exp, q_)}; }

Scalar PrimeField::inv(Scalar a) const {
    if (a.value == 0) {
        throw GroupSetupError("inverse of zero is undefined");
    }
    return pow(a, q_ - 2);
}

Polynomial random_polynomial(const PrimeField& field, std::size_t threshold, SplitMix64& rng) {
    if (threshold == 0) {
        throw InvalidThresholdError("threshold must be at least 1");
    }
    Polynomial poly;
    poly.coefficients.resize(threshold);
    for (std::size_t i = 0; i + 1 < threshold; ++i) {
        poly.coefficients[i] = field.random(rng);
    }
    // Leading coefficient nonzero so deg(f) == threshold - 1 exactly. For a
    // constant polynomial this also keeps the secret itself nonzero.
    poly.coefficients[threshold - 1] = field.random_nonzero(rng);
    return poly;
}

Scalar poly_eval(const PrimeField& field, const Polynomial& poly, Scalar x) {
    Scalar acc{0};
    for (auto it = poly.coefficients.rbegin(); it != poly.coefficients.rend(); ++it) {
        acc = field.add(field.mul(acc, x), *it);
    }
    return acc;
}

void require_distinct_nonzero_ids(const PrimeField& field, std::span<const Scalar> ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i].value == 0 || ids[i].value >= field.order()) {
            throw ZeroIdentityError("identity must be a nonzero field element");
        }
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (ids[i] == ids[j]) {
                throw DuplicateIdentityError("duplicate identity " + std::to_string(ids[i].value));
            }
        }
    }
}

Scalar lagrange_zero_coeff(const PrimeField& field, std::span<const Scalar> ids, std::size_t k) {
    if (k >= ids.size()) {
        throw IndexOutOfRangeError("lagrange index out of range");
    }
    require_distinct_nonzero_ids(field, ids);
    Scalar numerator{1};
    Scalar denominator{1};
    for (std::size_t m = 0; m < ids.size(); ++m) {
        if (m == k) continue;
        numerator = field.mul(numerator, field.neg(ids[m]));
        denominator = field.mul(denominator, field.sub(ids[k], ids[m]));
    }
    return field.mul(numerator, field.inv(denominator));
}

} // namespace orbitledger::math
