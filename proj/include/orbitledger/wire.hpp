#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orbitledger/consensus.hpp"

namespace orbitledger::wire {

// Length-prefixed binary records, little-endian, fixed field order. Every
// record must fit the 1024-byte message buffer; encoders enforce it.
//
//   record    := u16 payload_len | u8 type | payload
//   element   := u8 flags (bit0 = infinity) | u64 x | u64 y
//   type 0x01 contribution    := u8 phase (0 approval, 1 verification)
//                              | u64 round | u64 contributor_id | element
//   type 0x02 commitment      := u64 node_id | element
//   type 0x03 approval result := u64 round | u8 approved | element c_sum
//                              | u16 approver_count | approver_count * u64 ids
inline constexpr std::size_t kMaxMessageBytes = 1024;

enum class MessageType : std::uint8_t {
    contribution = 0x01,
    commitment = 0x02,
    approval_result = 0x03,
};

enum class Phase : std::uint8_t { approval = 0, verification = 1 };

struct ContributionMessage {
    Phase phase = Phase::approval;
    std::uint64_t round = 0;
    std::uint64_t contributor_id = 0;
    math::GroupElement point;
};

struct CommitmentMessage {
    std::uint64_t node_id = 0;
    math::GroupElement commitment;
};

struct ApprovalResultMessage {
    std::uint64_t round = 0;
    bool approved = false;
    math::GroupElement c_sum;
    std::vector<std::uint64_t> approver_ids;
};

std::vector<std::uint8_t> encode(const ContributionMessage& msg);
std::vector<std::uint8_t> encode(const CommitmentMessage& msg);
std::vector<std::uint8_t> encode(const ApprovalResultMessage& msg);

MessageType peek_type(std::span<const std::uint8_t> buffer);

ContributionMessage decode_contribution(std::span<const std::uint8_t> buffer);
CommitmentMessage decode_commitment(std::span<const std::uint8_t> buffer);
ApprovalResultMessage decode_approval_result(std::span<const std::uint8_t> buffer);

} // namespace orbitledger::wire
