#include "orbitledger/group.hpp"

#include <vector>

#include "orbitledger/errors.hpp"

namespace orbitledger::math {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    if (s >= m) s -= m;
    return s;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : m - b + a;
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

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

} // namespace

CurveParams demo_curve() {
    // y^2 = x^3 + 3x + 7 over F_1000003; point order 999853 is prime, so
    // every non-identity point generates.
    return CurveParams{1000003, 3, 7, 2, 498065};
}

GroupDescription GroupDescription::mock_additive(std::uint64_t order) {
    GroupDescription d;
    d.order_q = order;
    d.kind = GroupKind::mock_additive;
    return d;
}

GroupDescription GroupDescription::elliptic(const CurveParams& params, std::uint64_t order) {
    GroupDescription d;
    d.order_q = order;
    d.kind = GroupKind::elliptic_curve;
    d.curve = params;
    return d;
}

Group::Group(const GroupDescription& description) : desc_(description), scalars_(description.order_q) {
    if (desc_.kind == GroupKind::mock_additive) {
        generator_ = GroupElement{1, 0, false};
        return;
    }
    const CurveParams& c = desc_.curve;
    if (!is_prime_u64(c.p) || c.p >= (1ULL << 62)) {
        throw GroupSetupError("curve base field must be a prime below 2^62");
    }
    const std::uint64_t disc =
        addmod(mulmod(4, mulmod(c.a, mulmod(c.a, c.a, c.p), c.p), c.p), mulmod(27, mulmod(c.b, c.b, c.p), c.p), c.p);
    if (disc == 0) {
        throw GroupSetupError("curve is singular (discriminant zero)");
    }
    const std::uint64_t lhs = mulmod(c.gy, c.gy, c.p);
    const std::uint64_t rhs = addmod(addmod(mulmod(c.gx, mulmod(c.gx, c.gx, c.p), c.p), mulmod(c.a, c.gx, c.p), c.p), c.b, c.p);
    if (lhs != rhs) {
        throw GroupSetupError("generator is not on the curve");
    }
    generator_ = GroupElement{c.gx, c.gy, false};
    // order * G must be the identity; with a prime order this certifies the
    // generator's order exactly. scalar_mul reduces mod q, so run the ladder
    // on the raw order here.
    GroupElement probe = generator_;
    std::uint64_t e = desc_.order_q;
    GroupElement acc = identity();
    while (e != 0) {
        if (e & 1) acc = curve_add(acc, probe);
        probe = curve_add(probe, probe);
        e >>= 1;
    }
    if (!acc.infinity) {
        throw GroupSetupError("group order does not annihilate the generator");
    }
}

GroupElement Group::add(const GroupElement& lhs, const GroupElement& rhs) const {
    if (lhs.infinity) return rhs;
    if (rhs.infinity) return lhs;
    if (desc_.kind == GroupKind::mock_additive) {
        const std::uint64_t v = addmod(lhs.x, rhs.x, desc_.order_q);
        return v == 0 ? identity() : GroupElement{v, 0, false};
    }
    return curve_add(lhs, rhs);
}

GroupElement Group::curve_add(const GroupElement& lhs, const GroupElement& rhs) const {
    if (lhs.infinity) return rhs;
    if (rhs.infinity) return lhs;
    const std::uint64_t p = desc_.curve.p;
    if (lhs.x == rhs.x && addmod(lhs.y, rhs.y, p) == 0) {
        return identity();
    }
    std::uint64_t lambda;
    if (lhs.x == rhs.x && lhs.y == rhs.y) {
        // tangent slope (3x^2 + a) / 2y
        const std::uint64_t num = addmod(mulmod(3, mulmod(lhs.x, lhs.x, p), p), desc_.curve.a, p);
        lambda = mulmod(num, invmod(addmod(lhs.y, lhs.y, p), p), p);
    } else {
        lambda = mulmod(submod(rhs.y, lhs.y, p), invmod(submod(rhs.x, lhs.x, p), p), p);
    }
    const std::uint64_t x3 = submod(submod(mulmod(lambda, lambda, p), lhs.x, p), rhs.x, p);
    const std::uint64_t y3 = submod(mulmod(lambda, submod(lhs.x, x3, p), p), lhs.y, p);
    return GroupElement{x3, y3, false};
}

GroupElement Group::negate(const GroupElement& e) const {
    if (e.infinity) return e;
    if (desc_.kind == GroupKind::mock_additive) {
        return GroupElement{desc_.order_q - e.x, 0, false};
    }
    return GroupElement{e.x, e.y == 0 ? 0 : desc_.curve.p - e.y, false};
}

GroupElement Group::scalar_mul(Scalar s, const GroupElement& e) const {
    GroupElement acc = identity();
    GroupElement base = e;
    std::uint64_t k = s.value % desc_.order_q;
    while (k != 0) {
        if (k & 1) acc = add(acc, base);
        base = add(base, base);
        k >>= 1;
    }
    return acc;
}

GroupElement reconstruct_in_exponent(const Group& group, std::span<const IdShare> shares) {
    const PrimeField& field = group.scalar_field();
    std::vector<Scalar> ids;
    ids.reserve(shares.size());
    for (const IdShare& s : shares) ids.push_back(s.id);
    require_distinct_nonzero_ids(field, ids);

    GroupElement sum = group.identity();
    for (std::size_t k = 0; k < shares.size(); ++k) {
        const Scalar weight = field.mul(lagrange_zero_coeff(field, ids, k), shares[k].share);
        sum = group.add(sum, group.scalar_mul(weight, group.generator()));
    }
    return sum;
}

std::string to_string(const GroupElement& e) {
    if (e.infinity) return "O";
    return "(" + std::to_string(e.x) + "," + std::to_string(e.y) + ")";
}

} // namespace orbitledger::math
