#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orbitledger/group.hpp"

namespace orbitledger::consensus {

enum class RoleHint : std::uint8_t { approver = 0, verifier = 1, shared = 2 };

struct NodeIdentity {
    math::Scalar id;               // public identity x_i / y_i; nonzero, unique
    RoleHint role_hint = RoleHint::approver;
};

struct KeyShare {
    NodeIdentity owner;
    math::Scalar share; // f(owner.id), dealt by the group manager
};

struct ConsensusParams {
    std::size_t n = 0; // nodes in the network
    std::size_t t = 0; // mining threshold, deg(f)+1
    std::size_t v = 0; // verifiers per round, v >= t

    void validate() const;
};

// A miner's public point c_k = lambda_k * f(x_k) * P over the declared
// approver subset.
struct ApprovalContribution {
    NodeIdentity contributor;
    math::GroupElement point;
};

// A verifier's signing point d_k over the verifier subset; same formula,
// different subset.
struct VerificationContribution {
    NodeIdentity contributor;
    math::GroupElement point;
};

struct KeygenResult {
    std::vector<KeyShare> shares;
    math::GroupElement public_key;               // f(0) * P
    std::vector<math::GroupElement> commitments; // f(x_i) * P per share, same order
};

// Dealer setup: samples f of degree t-1, deals f(x_i) to ids 1..n and
// publishes f(0)*P plus per-id commitments. The polynomial is dropped once
// the shares are dealt.
KeygenResult keygen(std::size_t n, std::size_t t, const math::Group& group, std::uint64_t rng_seed);

// Same, with caller-supplied identities (distinct, nonzero).
KeygenResult keygen_with_ids(std::span<const math::Scalar> ids, std::size_t t, const math::Group& group,
                             std::uint64_t rng_seed);

ApprovalContribution compute_approval_contribution(const KeyShare& share, std::span<const math::Scalar> approver_ids,
                                                   const math::Group& group);

VerificationContribution compute_verification_contribution(const KeyShare& share,
                                                           std::span<const math::Scalar> verifier_ids,
                                                           const math::Group& group);

struct ApprovalOutcome {
    math::GroupElement sum; // sum of c_k, embedded in the block
    bool approved = false;  // sum == f(0) * P
};

// Folds the released c_k values; at least `threshold` distinct contributors
// are required before the block can carry the result.
ApprovalOutcome assemble_approval(std::span<const ApprovalContribution> contributions,
                                  const math::GroupElement& public_key, std::size_t threshold,
                                  const math::Group& group);

enum class VerifyResult : std::uint8_t { valid = 0, repeat_verification = 1 };

// The verifying phase decision: valid iff the c-sum matches f(0)*P and the
// released d_k values sum to the same point.
VerifyResult verify_block(const math::GroupElement& c_sum, std::span<const VerificationContribution> d_contributions,
                          const math::GroupElement& public_key, std::size_t min_verifiers, const math::Group& group);

} // namespace orbitledger::consensus
