#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "orbitledger/field.hpp"

namespace orbitledger::math {

enum class GroupKind : std::uint8_t {
    // Integers mod q under addition, generator 1. Discrete logs are
    // transparent, which is exactly what the oracle tests need. Not for
    // production use.
    mock_additive = 0,
    // Short Weierstrass curve y^2 = x^3 + ax + b over F_p with prime point
    // order q.
    elliptic_curve = 1,
};

struct CurveParams {
    std::uint64_t p = 0;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t gx = 0;
    std::uint64_t gy = 0;
};

// Demo curve with transparent 64-bit parameters (order 999853, prime).
CurveParams demo_curve();
constexpr std::uint64_t kDemoCurveOrder = 999853;

struct GroupDescription {
    std::uint64_t order_q = 0;
    GroupKind kind = GroupKind::mock_additive;
    CurveParams curve; // only meaningful for elliptic_curve

    static GroupDescription mock_additive(std::uint64_t order);
    static GroupDescription elliptic(const CurveParams& params, std::uint64_t order);
};

// Opaque group point. For the mock group only x is used; for curves the
// pair (x, y) is an affine point and `infinity` marks the identity.
struct GroupElement {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    bool infinity = true;

    auto operator<=>(const GroupElement&) const = default;
};

// Prime-order cyclic group with the operations the protocol needs. The
// construction validates the description: prime order, generator of that
// order, curve point actually on the curve.
class Group {
  public:
    explicit Group(const GroupDescription& description);

    const GroupDescription& description() const { return desc_; }
    const PrimeField& scalar_field() const { return scalars_; }
    std::uint64_t order() const { return scalars_.order(); }

    GroupElement identity() const { return GroupElement{}; }
    GroupElement generator() const { return generator_; }

    GroupElement add(const GroupElement& lhs, const GroupElement& rhs) const;
    GroupElement negate(const GroupElement& e) const;
    // Double-and-add; scalar_mul(0, e) is the identity.
    GroupElement scalar_mul(Scalar s, const GroupElement& e) const;

  private:
    GroupElement curve_add(const GroupElement& lhs, const GroupElement& rhs) const;

    GroupDescription desc_;
    PrimeField scalars_;
    GroupElement generator_;
};

struct IdShare {
    Scalar id;
    Scalar share;
};

// Interpolates f(0)*P from share multiples of the generator without ever
// touching f(0): sum_k lambda_k * share_k * P over the given ids.
GroupElement reconstruct_in_exponent(const Group& group, std::span<const IdShare> shares);

std::string to_string(const GroupElement& e);

} // namespace orbitledger::math
