#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "orbitledger/consensus.hpp"
#include "orbitledger/errors.hpp"
#include "orbitledger/rng.hpp"
#include "orbitledger/wire.hpp"

using namespace orbitledger;
using consensus::ApprovalContribution;
using consensus::KeygenResult;
using consensus::KeyShare;
using consensus::VerificationContribution;
using consensus::VerifyResult;
using math::GroupDescription;
using math::GroupElement;
using math::IdShare;
using math::Scalar;

namespace {

math::Group mock_group(std::uint64_t q = 11) { return math::Group(GroupDescription::mock_additive(q)); }

// Dealer with a fixed polynomial f(x) = 7 + 3x over Z_11, matching the
// worked examples.
KeyShare fixed_share(std::uint64_t id, std::uint64_t value) {
    return KeyShare{consensus::NodeIdentity{Scalar{id}, consensus::RoleHint::approver}, Scalar{value}};
}

std::vector<Scalar> ids(std::initializer_list<std::uint64_t> values) {
    std::vector<Scalar> out;
    for (std::uint64_t v : values) out.push_back(Scalar{v});
    return out;
}

} // namespace

TEST_CASE("keygen deals consistent shares and commitments") {
    const math::Group group = mock_group(1009);
    const KeygenResult keys = consensus::keygen(24, 8, group, 7);
    REQUIRE(keys.shares.size() == 24);
    REQUIRE(keys.commitments.size() == 24);

    for (std::size_t i = 0; i < keys.shares.size(); ++i) {
        CHECK(keys.shares[i].owner.id.value == i + 1);
        CHECK(group.scalar_mul(keys.shares[i].share, group.generator()) == keys.commitments[i]);
    }

    // 50 random 8-subsets of the 24 shares all reconstruct the public key.
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> index(24);
        for (std::size_t i = 0; i < 24; ++i) index[i] = i;
        rng.shuffle(index);
        std::vector<IdShare> subset;
        for (std::size_t k = 0; k < 8; ++k) {
            subset.push_back({keys.shares[index[k]].owner.id, keys.shares[index[k]].share});
        }
        CHECK(math::reconstruct_in_exponent(group, subset) == keys.public_key);
    }
}

TEST_CASE("keygen single node") {
    const math::Group group = mock_group(1009);
    const KeygenResult keys = consensus::keygen(1, 1, group, 3);
    REQUIRE(keys.shares.size() == 1);
    CHECK(group.scalar_mul(keys.shares[0].share, group.generator()) == keys.commitments[0]);
    const std::vector<IdShare> only{{keys.shares[0].owner.id, keys.shares[0].share}};
    CHECK(math::reconstruct_in_exponent(group, only) == keys.public_key);
}

TEST_CASE("keygen rejects bad thresholds") {
    const math::Group group = mock_group(1009);
    CHECK_THROWS_AS(consensus::keygen(5, 6, group, 1), InvalidThresholdError);
    CHECK_THROWS_AS(consensus::keygen(5, 0, group, 1), InvalidThresholdError);
}

TEST_CASE("approval contributions on the worked example") {
    const math::Group group = mock_group();
    // f(x) = 7 + 3x over Z_11: f(1) = 10, f(2) = 2.
    const auto approvers = ids({1, 2});

    const ApprovalContribution c1 = consensus::compute_approval_contribution(fixed_share(1, 10), approvers, group);
    CHECK(c1.point.x == 9); // lambda=2, 2*10 mod 11
    const ApprovalContribution c2 = consensus::compute_approval_contribution(fixed_share(2, 2), approvers, group);
    CHECK(c2.point.x == 9); // lambda=10, 10*2 mod 11

    // Single approver, t=1: lambda = 1, c = f(x) * P.
    const auto solo = ids({4});
    const ApprovalContribution c4 = consensus::compute_approval_contribution(fixed_share(4, 8), solo, group);
    CHECK(c4.point.x == 8);

    CHECK_THROWS_AS(consensus::compute_approval_contribution(fixed_share(3, 5), approvers, group), NotInSubsetError);
    CHECK_THROWS_AS(consensus::compute_approval_contribution(fixed_share(1, 10), ids({1, 1}), group),
                    DuplicateIdentityError);
}

TEST_CASE("assemble_approval folds contributions") {
    const math::Group group = mock_group();
    const GroupElement public_key = group.scalar_mul(Scalar{7}, group.generator());
    const auto approvers = ids({1, 2});
    std::vector<ApprovalContribution> contributions{
        consensus::compute_approval_contribution(fixed_share(1, 10), approvers, group),
        consensus::compute_approval_contribution(fixed_share(2, 2), approvers, group),
    };

    const auto outcome = consensus::assemble_approval(contributions, public_key, 2, group);
    CHECK(outcome.sum.x == 7); // 9 + 9 = 18 mod 11
    CHECK(outcome.approved);

    auto tampered = contributions;
    tampered[0].point = group.add(tampered[0].point, group.generator());
    CHECK_FALSE(consensus::assemble_approval(tampered, public_key, 2, group).approved);

    const std::vector<ApprovalContribution> short_list{contributions[0]};
    CHECK_THROWS_AS(consensus::assemble_approval(short_list, public_key, 2, group),
                    InsufficientContributionsError);
}

TEST_CASE("verification contributions on the worked example") {
    const math::Group group = mock_group();
    const auto verifiers = ids({1, 3}); // f(1) = 10, f(3) = 16 mod 11 = 5

    const VerificationContribution d1 =
        consensus::compute_verification_contribution(fixed_share(1, 10), verifiers, group);
    CHECK(d1.point.x == 4); // lambda = 3/2 = 7 mod 11, 7*10 = 4 mod 11
    const VerificationContribution d3 =
        consensus::compute_verification_contribution(fixed_share(3, 5), verifiers, group);
    CHECK(d3.point.x == 3); // lambda = -1/2 = 5 mod 11, 5*5 = 3 mod 11

    // Same subset in both phases gives identical points.
    const auto subset = ids({1, 2});
    const auto c = consensus::compute_approval_contribution(fixed_share(1, 10), subset, group);
    const auto d = consensus::compute_verification_contribution(fixed_share(1, 10), subset, group);
    CHECK(c.point == d.point);
}

TEST_CASE("verify_block checks both sums") {
    const math::Group group = mock_group();
    const GroupElement public_key = group.scalar_mul(Scalar{7}, group.generator());
    const auto verifiers = ids({1, 3});
    std::vector<VerificationContribution> ds{
        consensus::compute_verification_contribution(fixed_share(1, 10), verifiers, group),
        consensus::compute_verification_contribution(fixed_share(3, 5), verifiers, group),
    };

    CHECK(consensus::verify_block(public_key, ds, public_key, 2, group) == VerifyResult::valid); // 4 + 3 = 7

    auto tampered = ds;
    tampered[1].point = group.add(tampered[1].point, group.generator());
    CHECK(consensus::verify_block(public_key, tampered, public_key, 2, group) == VerifyResult::repeat_verification);

    // c_sum diverges from the public key even though the d sum matches it.
    const GroupElement wrong_sum = group.add(public_key, group.generator());
    CHECK(consensus::verify_block(wrong_sum, ds, public_key, 2, group) == VerifyResult::repeat_verification);

    CHECK_THROWS_AS(consensus::verify_block(public_key, std::vector<VerificationContribution>{ds[0]}, public_key, 2,
                                            group),
                    InsufficientContributionsError);
}

TEST_CASE("pipeline completeness across subset choices") {
    const math::Group group = mock_group(1009);
    SplitMix64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + rng.next_below(12);
        const std::size_t t = 1 + rng.next_below(n);
        const KeygenResult keys = consensus::keygen(n, t, group, rng.next());

        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);

        // Approver subset of exactly t, verifier subset of t from the tail
        // (overlap allowed when n < 2t).
        std::vector<Scalar> approver_ids, verifier_ids;
        for (std::size_t k = 0; k < t; ++k) approver_ids.push_back(keys.shares[order[k]].owner.id);
        for (std::size_t k = 0; k < t; ++k) {
            verifier_ids.push_back(keys.shares[order[n - 1 - k]].owner.id);
        }
        std::sort(approver_ids.begin(), approver_ids.end());
        std::sort(verifier_ids.begin(), verifier_ids.end());

        std::vector<ApprovalContribution> cs;
        for (const Scalar& id : approver_ids) {
            cs.push_back(consensus::compute_approval_contribution(keys.shares[id.value - 1], approver_ids, group));
        }
        const auto outcome = consensus::assemble_approval(cs, keys.public_key, t, group);
        CHECK(outcome.approved);

        std::vector<VerificationContribution> dsows;
        for (const Scalar& id : verifier_ids) {
            dsows.push_back(consensus::compute_verification_contribution(keys.shares[id.value - 1], verifier_ids, group));
        }
        CHECK(consensus::verify_block(outcome.sum, dsows, keys.public_key, t, group) == VerifyResult::valid);
    }
}

TEST_CASE("two disjoint approver subsets agree on the sum") {
    const math::Group group = mock_group(1009);
    const KeygenResult keys = consensus::keygen(10, 4, group, 21);

    auto run_subset = [&](std::initializer_list<std::uint64_t> subset_ids) {
        const auto subset = ids(subset_ids);
        std::vector<ApprovalContribution> cs;
        for (const Scalar& id : subset) {
            cs.push_back(consensus::compute_approval_contribution(keys.shares[id.value - 1], subset, group));
        }
        return consensus::assemble_approval(cs, keys.public_key, 4, group).sum;
    };

    CHECK(run_subset({1, 2, 3, 4}) == run_subset({5, 6, 7, 8}));
    CHECK(run_subset({1, 2, 3, 4}) == keys.public_key);
}

TEST_CASE("soundness: a corrupted share trips verification") {
    const math::Group group = mock_group(100003);
    SplitMix64 rng(77);
    int rejected = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t n = 5 + rng.next_below(10);
        const std::size_t t = 2 + rng.next_below(n - 1);
        const KeygenResult keys = consensus::keygen(n, t, group, rng.next());

        std::vector<Scalar> subset_ids;
        for (std::size_t k = 0; k < t; ++k) subset_ids.push_back(keys.shares[k].owner.id);

        // One miner computes from a uniformly random share instead of its
        // dealt one.
        auto corrupted = keys.shares;
        corrupted[rng.next_below(t)].share = group.scalar_field().random(rng);

        std::vector<ApprovalContribution> cs;
        for (const Scalar& id : subset_ids) {
            cs.push_back(consensus::compute_approval_contribution(corrupted[id.value - 1], subset_ids, group));
        }
        const auto outcome = consensus::assemble_approval(cs, keys.public_key, t, group);

        // Verifiers hold honest shares; the divergent c sum must force a
        // repeat regardless of their own contributions.
        std::vector<VerificationContribution> ds;
        for (const Scalar& id : subset_ids) {
            ds.push_back(consensus::compute_verification_contribution(keys.shares[id.value - 1], subset_ids, group));
        }
        if (!outcome.approved &&
            consensus::verify_block(outcome.sum, ds, keys.public_key, t, group) == VerifyResult::repeat_verification) {
            ++rejected;
        }
    }
    CHECK(rejected >= 99);
}

TEST_CASE("wire round trips stay inside the 1024-byte buffer") {
    const math::Group group = mock_group(1009);
    SplitMix64 rng(13);

    for (int trial = 0; trial < 50; ++trial) {
        wire::ContributionMessage msg;
        msg.phase = trial % 2 == 0 ? wire::Phase::approval : wire::Phase::verification;
        msg.round = rng.next();
        msg.contributor_id = 1 + rng.next_below(50);
        msg.point = group.scalar_mul(group.scalar_field().random(rng), group.generator());
        const auto bytes = wire::encode(msg);
        CHECK(bytes.size() <= wire::kMaxMessageBytes);
        CHECK(wire::peek_type(bytes) == wire::MessageType::contribution);
        const auto decoded = wire::decode_contribution(bytes);
        CHECK(decoded.phase == msg.phase);
        CHECK(decoded.round == msg.round);
        CHECK(decoded.contributor_id == msg.contributor_id);
        CHECK(decoded.point == msg.point);
    }

    wire::CommitmentMessage commitment{9, group.scalar_mul(Scalar{123}, group.generator())};
    const auto commitment_bytes = wire::encode(commitment);
    CHECK(commitment_bytes.size() <= wire::kMaxMessageBytes);
    const auto commitment_back = wire::decode_commitment(commitment_bytes);
    CHECK(commitment_back.node_id == 9);
    CHECK(commitment_back.commitment == commitment.commitment);

    // Largest legal roster: 50 approvers still fits the buffer.
    wire::ApprovalResultMessage result;
    result.round = 3;
    result.approved = true;
    result.c_sum = group.generator();
    for (std::uint64_t id = 1; id <= 50; ++id) result.approver_ids.push_back(id);
    const auto result_bytes = wire::encode(result);
    CHECK(result_bytes.size() <= wire::kMaxMessageBytes);
    const auto result_back = wire::decode_approval_result(result_bytes);
    CHECK(result_back.approver_ids == result.approver_ids);

    // An oversized roster must refuse to encode rather than overflow.
    for (std::uint64_t id = 51; id <= 130; ++id) result.approver_ids.push_back(id);
    CHECK_THROWS_AS(wire::encode(result), WireFormatError);

    // Truncation and trailing garbage are detected.
    auto damaged = commitment_bytes;
    damaged.pop_back();
    CHECK_THROWS_AS(wire::decode_commitment(damaged), WireFormatError);
    damaged = commitment_bytes;
    damaged.push_back(0);
    CHECK_THROWS_AS(wire::decode_commitment(damaged), WireFormatError);
}
