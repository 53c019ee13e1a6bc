#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "orbitledger/errors.hpp"
#include "orbitledger/field.hpp"
#include "orbitledger/group.hpp"
#include "orbitledger/rng.hpp"

using namespace orbitledger;
using math::GroupDescription;
using math::GroupElement;
using math::IdShare;
using math::Polynomial;
using math::PrimeField;
using math::Scalar;

namespace {

// Independent oracle: evaluate sum c_i * x^i term by term, no Horner.
std::uint64_t naive_poly_eval(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t q) {
    const PrimeField field(q);
    Scalar acc{0};
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        Scalar term{coeffs[i] % q};
        for (std::size_t k = 0; k < i; ++k) term = field.mul(term, Scalar{x % q});
        acc = field.add(acc, term);
    }
    return acc.value;
}

Polynomial make_poly(const PrimeField& field, std::initializer_list<std::uint64_t> coeffs) {
    Polynomial poly;
    for (std::uint64_t c : coeffs) poly.coefficients.push_back(field.reduce(c));
    return poly;
}

} // namespace

TEST_CASE("prime checks") {
    CHECK(math::is_prime_u64(11));
    CHECK(math::is_prime_u64(1009));
    CHECK(math::is_prime_u64(2305843009213693951ULL)); // 2^61 - 1
    CHECK_FALSE(math::is_prime_u64(1));
    CHECK_FALSE(math::is_prime_u64(1000));
    CHECK_THROWS_AS(PrimeField(15), GroupSetupError);
}

TEST_CASE("poly_eval matches the naive power-sum oracle") {
    const PrimeField field(11);
    const Polynomial poly = make_poly(field, {7, 3}); // f(x) = 7 + 3x

    CHECK(math::poly_eval(field, poly, Scalar{1}).value == 10);
    CHECK(math::poly_eval(field, poly, Scalar{0}).value == 7); // constant term
    CHECK(math::poly_eval(field, poly, Scalar{2}).value == 2); // 13 mod 11

    for (std::uint64_t x = 0; x < 11; ++x) {
        CHECK(math::poly_eval(field, poly, Scalar{x}).value == naive_poly_eval({7, 3}, x, 11));
    }

    SplitMix64 rng(7);
    const PrimeField big(1009);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint64_t> coeffs;
        for (int i = 0; i < 5; ++i) coeffs.push_back(rng.next_below(1009));
        const std::uint64_t x = rng.next_below(1009);
        Polynomial poly2;
        for (std::uint64_t c : coeffs) poly2.coefficients.push_back(Scalar{c});
        CHECK(math::poly_eval(big, poly2, Scalar{x}).value == naive_poly_eval(coeffs, x, 1009));
    }
}

TEST_CASE("lagrange coefficients at zero") {
    const PrimeField field(11);
    const std::vector<Scalar> ids{{1}, {2}};

    CHECK(math::lagrange_zero_coeff(field, ids, 0).value == 2);  // -2/(1-2) mod 11
    CHECK(math::lagrange_zero_coeff(field, ids, 1).value == 10); // -1/(2-1) mod 11

    const std::vector<Scalar> single{{5}};
    CHECK(math::lagrange_zero_coeff(field, single, 0).value == 1); // empty product

    const std::vector<Scalar> dup{{3}, {3}};
    CHECK_THROWS_AS(math::lagrange_zero_coeff(field, dup, 0), DuplicateIdentityError);
    const std::vector<Scalar> zero{{0}, {2}};
    CHECK_THROWS_AS(math::lagrange_zero_coeff(field, zero, 0), ZeroIdentityError);
}

TEST_CASE("lagrange interpolation recovers f(0) over random subsets") {
    const PrimeField field(1009);
    SplitMix64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t t = 1 + rng.next_below(6);
        const Polynomial poly = math::random_polynomial(field, t, rng);

        std::vector<Scalar> ids;
        while (ids.size() < t + 2) {
            const Scalar candidate{1 + rng.next_below(1008)};
            if (std::find(ids.begin(), ids.end(), candidate) == ids.end()) ids.push_back(candidate);
        }
        Scalar sum{0};
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const Scalar lambda = math::lagrange_zero_coeff(field, ids, k);
            sum = field.add(sum, field.mul(lambda, math::poly_eval(field, poly, ids[k])));
        }
        CHECK(sum == poly.coefficients.front());
    }
}

TEST_CASE("sum of lagrange coefficients is one") {
    const PrimeField field(1009);
    SplitMix64 rng(11);
    std::vector<Scalar> ids;
    for (std::uint64_t v : {4ULL, 9ULL, 17ULL, 40ULL, 903ULL}) ids.push_back(Scalar{v});
    Scalar sum{0};
    for (std::size_t k = 0; k < ids.size(); ++k) {
        sum = field.add(sum, math::lagrange_zero_coeff(field, ids, k));
    }
    CHECK(sum.value == 1);
    (void)rng;
}

TEST_CASE("lagrange coefficient ignores subset ordering") {
    const PrimeField field(101);
    const std::vector<Scalar> a{{3}, {7}, {12}};
    const std::vector<Scalar> b{{12}, {3}, {7}};
    // id 7 sits at different indices in the two orderings.
    CHECK(math::lagrange_zero_coeff(field, a, 1) == math::lagrange_zero_coeff(field, b, 2));
}

TEST_CASE("mock group arithmetic") {
    const math::Group group(GroupDescription::mock_additive(11));
    CHECK(group.scalar_mul(Scalar{7}, group.generator()).x == 7);
    CHECK(group.scalar_mul(Scalar{0}, group.generator()).infinity);
    CHECK(group.scalar_mul(Scalar{11 % 11}, group.generator()).infinity); // order annihilates

    SplitMix64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Scalar a = group.scalar_field().random(rng);
        const Scalar b = group.scalar_field().random(rng);
        const GroupElement pa = group.scalar_mul(a, group.generator());
        const GroupElement pb = group.scalar_mul(b, group.generator());
        // homomorphism and commutativity
        CHECK(group.add(pa, pb) == group.scalar_mul(group.scalar_field().add(a, b), group.generator()));
        CHECK(group.add(pa, pb) == group.add(pb, pa));
        CHECK(group.add(pa, group.negate(pa)).infinity);
    }
}

TEST_CASE("group associativity on sampled triples") {
    for (bool mock : {true, false}) {
        const math::Group group(mock ? GroupDescription::mock_additive(1009)
                                     : GroupDescription::elliptic(math::demo_curve(), math::kDemoCurveOrder));
        SplitMix64 rng(17);
        for (int trial = 0; trial < 25; ++trial) {
            const GroupElement a = group.scalar_mul(group.scalar_field().random(rng), group.generator());
            const GroupElement b = group.scalar_mul(group.scalar_field().random(rng), group.generator());
            const GroupElement c = group.scalar_mul(group.scalar_field().random(rng), group.generator());
            CHECK(group.add(group.add(a, b), c) == group.add(a, group.add(b, c)));
        }
    }
}

TEST_CASE("demo curve group") {
    const math::Group group(GroupDescription::elliptic(math::demo_curve(), math::kDemoCurveOrder));

    // Reference multiples computed with an independent affine ladder.
    const GroupElement g2 = group.scalar_mul(Scalar{2}, group.generator());
    CHECK(g2.x == 392857);
    CHECK(g2.y == 738162);
    const GroupElement g3 = group.scalar_mul(Scalar{3}, group.generator());
    CHECK(g3.x == 287896);
    CHECK(g3.y == 5096);
    const GroupElement g7 = group.scalar_mul(Scalar{7}, group.generator());
    CHECK(g7.x == 567964);
    CHECK(g7.y == 205463);
    const GroupElement big = group.scalar_mul(Scalar{12345}, group.generator());
    CHECK(big.x == 13371);
    CHECK(big.y == 713779);

    CHECK(group.add(g2, group.generator()) == g3);

    // Rejects off-curve generators and composite orders.
    math::CurveParams bad = math::demo_curve();
    bad.gy += 1;
    CHECK_THROWS_AS(math::Group(GroupDescription::elliptic(bad, math::kDemoCurveOrder)), GroupSetupError);
    CHECK_THROWS_AS(math::Group(GroupDescription::elliptic(math::demo_curve(), 999852)), GroupSetupError);
}

TEST_CASE("reconstruct_in_exponent on the worked shares") {
    const math::Group group(GroupDescription::mock_additive(11));
    // f(x) = 7 + 3x: f(1)=10, f(2)=2, f(3)=5
    const std::vector<IdShare> a{{Scalar{1}, Scalar{10}}, {Scalar{2}, Scalar{2}}};
    CHECK(math::reconstruct_in_exponent(group, a).x == 7); // 2*10 + 10*2 = 40 = 7 mod 11
    const std::vector<IdShare> b{{Scalar{1}, Scalar{10}}, {Scalar{3}, Scalar{5}}};
    CHECK(math::reconstruct_in_exponent(group, b).x == 7); // 7*10 + 5*5 = 95 = 7 mod 11

    // Single share of a constant polynomial: lambda = 1.
    const std::vector<IdShare> single{{Scalar{4}, Scalar{9}}};
    CHECK(math::reconstruct_in_exponent(group, single).x == 9);
}

TEST_CASE("reconstruction property over random polynomials and subset sizes") {
    const math::Group group(GroupDescription::mock_additive(1009));
    const PrimeField& field = group.scalar_field();
    SplitMix64 rng(2024);

    int undersized_matches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t t = 2 + rng.next_below(5);
        const Polynomial poly = math::random_polynomial(field, t, rng);
        const GroupElement expected = group.scalar_mul(poly.coefficients.front(), group.generator());

        std::vector<Scalar> ids;
        while (ids.size() < t + 3) {
            const Scalar candidate{1 + rng.next_below(1008)};
            if (std::find(ids.begin(), ids.end(), candidate) == ids.end()) ids.push_back(candidate);
        }

        // Any subset of size >= t reconstructs exactly.
        for (std::size_t size : {t, t + 1, t + 3}) {
            std::vector<IdShare> shares;
            for (std::size_t k = 0; k < size; ++k) {
                shares.push_back({ids[k], math::poly_eval(field, poly, ids[k])});
            }
            CHECK(math::reconstruct_in_exponent(group, shares) == expected);
        }

        // One share short: the reconstruction should miss.
        std::vector<IdShare> short_set;
        for (std::size_t k = 0; k + 1 < t; ++k) {
            short_set.push_back({ids[k], math::poly_eval(field, poly, ids[k])});
        }
        if (!short_set.empty() && math::reconstruct_in_exponent(group, short_set) == expected) {
            ++undersized_matches;
        }
    }
    CHECK(undersized_matches == 0);
}
