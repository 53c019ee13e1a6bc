#include "orbitledger/consensus.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "orbitledger/errors.hpp"

namespace orbitledger::consensus {

using math::GroupElement;
using math::Scalar;

void ConsensusParams::validate() const {
    if (t < 1 || t > n) {
        throw InvalidThresholdError("threshold t=" + std::to_string(t) + " must satisfy 1 <= t <= n=" + std::to_string(n));
    }
    if (v < t) {
        throw InvalidThresholdError("verifier count v=" + std::to_string(v) + " must be at least t=" + std::to_string(t));
    }
}

KeygenResult keygen(std::size_t n, std::size_t t, const math::Group& group, std::uint64_t rng_seed) {
    std::vector<Scalar> ids;
    ids.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        ids.push_back(Scalar{i});
    }
    return keygen_with_ids(ids, t, group, rng_seed);
}

KeygenResult keygen_with_ids(std::span<const Scalar> ids, std::size_t t, const math::Group& group,
                             std::uint64_t rng_seed) {
    const std::size_t n = ids.size();
    if (t < 1 || t > n) {
        throw InvalidThresholdError("threshold t=" + std::to_string(t) + " must satisfy 1 <= t <= n=" + std::to_string(n));
    }
    const math::PrimeField& field = group.scalar_field();
    require_distinct_nonzero_ids(field, ids);

    SplitMix64 rng(rng_seed);
    const math::Polynomial poly = math::random_polynomial(field, t, rng);

    KeygenResult out;
    out.public_key = group.scalar_mul(poly.coefficients.front(), group.generator());
    out.shares.reserve(n);
    out.commitments.reserve(n);
    for (const Scalar& id : ids) {
        const Scalar share = math::poly_eval(field, poly, id);
        out.shares.push_back(KeyShare{NodeIdentity{id, RoleHint::approver}, share});
        out.commitments.push_back(group.scalar_mul(share, group.generator()));
    }
    return out; // poly goes out of scope here; only shares and points survive
}

namespace {

GroupElement weighted_share_point(const KeyShare& share, std::span<const Scalar> subset_ids, const math::Group& group,
                                  const char* subset_name) {
    const math::PrimeField& field = group.scalar_field();
    const auto it = std::find(subset_ids.begin(), subset_ids.end(), share.owner.id);
    if (it == subset_ids.end()) {
        throw NotInSubsetError("node " + std::to_string(share.owner.id.value) + " is not in the " + subset_name +
                               " subset");
    }
    const std::size_t k = static_cast<std::size_t>(it - subset_ids.begin());
    const Scalar lambda = math::lagrange_zero_coeff(field, subset_ids, k);
    return group.scalar_mul(field.mul(lambda, share.share), group.generator());
}

template <typename Contribution>
std::size_t distinct_contributors(std::span<const Contribution> contributions) {
    std::unordered_set<std::uint64_t> seen;
    for (const Contribution& c : contributions) {
        seen.insert(c.contributor.id.value);
    }
    return seen.size();
}

} // namespace

ApprovalContribution compute_approval_contribution(const KeyShare& share, std::span<const Scalar> approver_ids,
                                                   const math::Group& group) {
    return ApprovalContribution{share.owner, weighted_share_point(share, approver_ids, group, "approver")};
}

VerificationContribution compute_verification_contribution(const KeyShare& share,
                                                           std::span<const Scalar> verifier_ids,
                                                           const math::Group& group) {
    return VerificationContribution{share.owner, weighted_share_point(share, verifier_ids, group, "verifier")};
}

ApprovalOutcome assemble_approval(std::span<const ApprovalContribution> contributions,
                                  const math::GroupElement& public_key, std::size_t threshold,
                                  const math::Group& group) {
    if (distinct_contributors(contributions) < threshold) {
        throw InsufficientContributionsError("mining needs at least " + std::to_string(threshold) +
                                             " distinct approver contributions");
    }
    GroupElement sum = group.identity();
    for (const ApprovalContribution& c : contributions) {
        sum = group.add(sum, c.point);
    }
    return ApprovalOutcome{sum, sum == public_key};
}

VerifyResult verify_block(const math::GroupElement& c_sum, std::span<const VerificationContribution> d_contributions,
                          const math::GroupElement& public_key, std::size_t min_verifiers, const math::Group& group) {
    if (distinct_contributors(d_contributions) < min_verifiers) {
        throw InsufficientContributionsError("verification needs at least " + std::to_string(min_verifiers) +
                                             " distinct verifier contributions");
    }
    // Step one of the verifying phase: the mining result must already be
    // f(0)*P before the d_k signatures are even consulted.
    if (!(c_sum == public_key)) {
        return VerifyResult::repeat_verification;
    }
    GroupElement d_sum = group.identity();
    for (const VerificationContribution& c : d_contributions) {
        d_sum = group.add(d_sum, c.point);
    }
    return d_sum == c_sum ? VerifyResult::valid : VerifyResult::repeat_verification;
}

} // namespace orbitledger::consensus
