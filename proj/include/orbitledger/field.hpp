#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "orbitledger/rng.hpp"

namespace orbitledger::math {

// Residue modulo a prime group order. Plain value type; all arithmetic goes
// through a PrimeField so the modulus lives in exactly one place.
struct Scalar {
    std::uint64_t value = 0;
    auto operator<=>(const Scalar&) const = default;
};

bool is_prime_u64(std::uint64_t n);

// Arithmetic modulo a prime q < 2^62. Shares, identities and Lagrange
// coefficients all live in this field (the scalar field of the group, not
// the curve base field).
class PrimeField {
  public:
    explicit PrimeField(std::uint64_t order);

    std::uint64_t order() const { return q_; }

    Scalar reduce(std::uint64_t v) const { return {v % q_}; }
    Scalar from_signed(std::int64_t v) const;

    Scalar add(Scalar a, Scalar b) const;
    Scalar sub(Scalar a, Scalar b) const;
    Scalar neg(Scalar a) const { return a.value == 0 ? a : Scalar{q_ - a.value}; }
    Scalar mul(Scalar a, Scalar b) const;
    Scalar pow(Scalar base, std::uint64_t exp) const;
    // Multiplicative inverse; undefined for zero (throws).
    Scalar inv(Scalar a) const;

    Scalar random_nonzero(SplitMix64& rng) const { return {1 + rng.next_below(q_ - 1)}; }
    Scalar random(SplitMix64& rng) const { return {rng.next_below(q_)}; }

  private:
    std::uint64_t q_;
};

// Dealer polynomial, constant term first. coefficients[0] is the group
// secret f(0); the leading coefficient is kept nonzero so the degree is
// exactly coefficients.size() - 1.
struct Polynomial {
    std::vector<Scalar> coefficients;

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

Polynomial random_polynomial(const PrimeField& field, std::size_t threshold, SplitMix64& rng);

// Horner evaluation of f(x) mod q.
Scalar poly_eval(const PrimeField& field, const Polynomial& poly, Scalar x);

// Lagrange basis coefficient at zero for ids[k] over the participating
// subset: prod_{m != k} (-x_m) / (x_k - x_m). Ids must be distinct and
// nonzero (an id of zero would hand out f(0) itself).
Scalar lagrange_zero_coeff(const PrimeField& field, std::span<const Scalar> ids, std::size_t k);

void require_distinct_nonzero_ids(const PrimeField& field, std::span<const Scalar> ids);

} // namespace orbitledger::math
