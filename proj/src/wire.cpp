#include "orbitledger/wire.hpp"

#include <string>

#include "orbitledger/errors.hpp"

namespace orbitledger::wire {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void put_element(std::vector<std::uint8_t>& out, const math::GroupElement& e) {
    put_u8(out, e.infinity ? 1 : 0);
    put_u64(out, e.x);
    put_u64(out, e.y);
}

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

    std::uint8_t u8() {
        need(1);
        return buf_[pos_++];
    }

    std::uint16_t u16() {
        need(2);
        const std::uint16_t v = static_cast<std::uint16_t>(buf_[pos_] | (buf_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    math::GroupElement element() {
        math::GroupElement e;
        e.infinity = (u8() & 1) != 0;
        e.x = u64();
        e.y = u64();
        return e;
    }

    void finish() const {
        if (pos_ != buf_.size()) {
            throw WireFormatError("trailing bytes at offset " + std::to_string(pos_));
        }
    }

  private:
    void need(std::size_t n) const {
        if (pos_ + n > buf_.size()) {
            throw WireFormatError("record truncated at offset " + std::to_string(pos_));
        }
    }

    std::span<const std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> seal(MessageType type, const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> out;
    out.reserve(payload.size() + 3);
    put_u16(out, static_cast<std::uint16_t>(payload.size()));
    put_u8(out, static_cast<std::uint8_t>(type));
    out.insert(out.end(), payload.begin(), payload.end());
    if (out.size() > kMaxMessageBytes) {
        throw WireFormatError("message of " + std::to_string(out.size()) + " bytes exceeds the 1024-byte buffer");
    }
    return out;
}

Reader open(std::span<const std::uint8_t> buffer, MessageType expected) {
    if (buffer.size() < 3 || buffer.size() > kMaxMessageBytes) {
        throw WireFormatError("record size " + std::to_string(buffer.size()) + " out of bounds");
    }
    const std::uint16_t len = static_cast<std::uint16_t>(buffer[0] | (buffer[1] << 8));
    if (static_cast<std::size_t>(len) + 3 != buffer.size()) {
        throw WireFormatError("length prefix " + std::to_string(len) + " does not match record size");
    }
    if (buffer[2] != static_cast<std::uint8_t>(expected)) {
        throw WireFormatError("unexpected message type " + std::to_string(buffer[2]));
    }
    return Reader(buffer.subspan(3));
}

} // namespace

std::vector<std::uint8_t> encode(const ContributionMessage& msg) {
    std::vector<std::uint8_t> payload;
    put_u8(payload, static_cast<std::uint8_t>(msg.phase));
    put_u64(payload, msg.round);
    put_u64(payload, msg.contributor_id);
    put_element(payload, msg.point);
    return seal(MessageType::contribution, payload);
}

std::vector<std::uint8_t> encode(const CommitmentMessage& msg) {
    std::vector<std::uint8_t> payload;
    put_u64(payload, msg.node_id);
    put_element(payload, msg.commitment);
    return seal(MessageType::commitment, payload);
}

std::vector<std::uint8_t> encode(const ApprovalResultMessage& msg) {
    std::vector<std::uint8_t> payload;
    put_u64(payload, msg.round);
    put_u8(payload, msg.approved ? 1 : 0);
    put_element(payload, msg.c_sum);
    put_u16(payload, static_cast<std::uint16_t>(msg.approver_ids.size()));
    for (std::uint64_t id : msg.approver_ids) {
        put_u64(payload, id);
    }
    return seal(MessageType::approval_result, payload);
}

MessageType peek_type(std::span<const std::uint8_t> buffer) {
    if (buffer.size() < 3) {
        throw WireFormatError("record shorter than header");
    }
    return static_cast<MessageType>(buffer[2]);
}

ContributionMessage decode_contribution(std::span<const std::uint8_t> buffer) {
    Reader r = open(buffer, MessageType::contribution);
    ContributionMessage msg;
    const std::uint8_t phase = r.u8();
    if (phase > 1) {
        throw WireFormatError("unknown contribution phase " + std::to_string(phase));
    }
    msg.phase = static_cast<Phase>(phase);
    msg.round = r.u64();
    msg.contributor_id = r.u64();
    msg.point = r.element();
    r.finish();
    return msg;
}

CommitmentMessage decode_commitment(std::span<const std::uint8_t> buffer) {
    Reader r = open(buffer, MessageType::commitment);
    CommitmentMessage msg;
    msg.node_id = r.u64();
    msg.commitment = r.element();
    r.finish();
    return msg;
}

ApprovalResultMessage decode_approval_result(std::span<const std::uint8_t> buffer) {
    Reader r = open(buffer, MessageType::approval_result);
    ApprovalResultMessage msg;
    msg.round = r.u64();
    msg.approved = r.u8() != 0;
    msg.c_sum = r.element();
    const std::uint16_t count = r.u16();
    msg.approver_ids.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
        msg.approver_ids.push_back(r.u64());
    }
    r.finish();
    return msg;
}

} // namespace orbitledger::wire
