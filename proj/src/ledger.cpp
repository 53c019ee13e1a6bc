#include "orbitledger/ledger.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "orbitledger/errors.hpp"

namespace orbitledger::ledger {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

void put_digest(std::vector<std::uint8_t>& out, const Digest& d) { out.insert(out.end(), d.begin(), d.end()); }

void put_element(std::vector<std::uint8_t>& out, const math::GroupElement& e) {
    out.push_back(e.infinity ? 1 : 0);
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
        std::uint16_t v = static_cast<std::uint16_t>(buf_[pos_] | (buf_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    Digest digest() {
        need(32);
        Digest d;
        std::memcpy(d.data(), buf_.data() + pos_, 32);
        pos_ += 32;
        return d;
    }

    math::GroupElement element() {
        math::GroupElement e;
        e.infinity = (u8() & 1) != 0;
        e.x = u64();
        e.y = u64();
        return e;
    }

    std::size_t offset() const { return pos_; }

    void finish() const {
        if (pos_ != buf_.size()) {
            throw ChainIoError("trailing bytes in block record at offset " + std::to_string(pos_));
        }
    }

  private:
    void need(std::size_t n) const {
        if (pos_ + n > buf_.size()) {
            throw ChainIoError("block record truncated at byte offset " + std::to_string(pos_));
        }
    }

    std::span<const std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

std::string digest_key(const Digest& d) { return std::string(reinterpret_cast<const char*>(d.data()), d.size()); }

} // namespace

bool DebrisObservation::valid() const {
    const double speed = std::sqrt(velocity_km_s[0] * velocity_km_s[0] + velocity_km_s[1] * velocity_km_s[1] +
                                   velocity_km_s[2] * velocity_km_s[2]);
    if (!(speed < 11.0)) return false;
    for (double u : uncertainty_km) {
        if (!(u >= 0.0)) return false;
    }
    for (double c : position_km) {
        if (!std::isfinite(c)) return false;
    }
    return std::isfinite(epoch_s);
}

Transaction Transaction::make(const DebrisObservation& payload, std::uint64_t originator_id, double created_at_s) {
    Transaction tx;
    tx.payload = payload;
    tx.originator_id = originator_id;
    tx.created_at_s = created_at_s;
    tx.digest = Sha256::hash(tx.canonical_bytes());
    return tx;
}

std::vector<std::uint8_t> Transaction::canonical_bytes() const {
    std::vector<std::uint8_t> out;
    out.reserve(kTransactionBytes);
    put_u64(out, payload.object_tag);
    put_f64(out, payload.epoch_s);
    for (double v : payload.position_km) put_f64(out, v);
    for (double v : payload.velocity_km_s) put_f64(out, v);
    for (double v : payload.uncertainty_km) put_f64(out, v);
    put_u64(out, originator_id);
    put_f64(out, created_at_s);
    return out;
}

bool Transaction::digest_matches() const { return Sha256::hash(canonical_bytes()) == digest; }

Digest compute_tx_root(std::span<const Transaction> transactions) {
    Sha256 h;
    for (const Transaction& tx : transactions) {
        h.update(tx.digest);
    }
    return h.finish();
}

std::vector<std::uint8_t> Block::link_bytes() const {
    std::vector<std::uint8_t> out;
    put_u64(out, height);
    put_digest(out, prev_digest);
    put_digest(out, tx_root);
    put_u16(out, static_cast<std::uint16_t>(approver_ids.size()));
    for (std::uint64_t id : approver_ids) put_u64(out, id);
    return out;
}

std::vector<std::uint8_t> Block::header_bytes() const {
    std::vector<std::uint8_t> out = link_bytes();
    put_element(out, approval_sum);
    put_element(out, verification_sum);
    return out;
}

Digest Block::digest() const { return Sha256::hash(link_bytes()); }

Mempool::Mempool(std::size_t capacity) : capacity_(capacity) {}

bool Mempool::submit(const Transaction& tx) {
    if (!tx.payload.valid() || !tx.digest_matches()) {
        return false;
    }
    if (seen_.contains(digest_key(tx.digest))) {
        return false;
    }
    if (pending_.size() >= capacity_) {
        throw PoolFullError("mempool at capacity " + std::to_string(capacity_));
    }
    pending_.push_back(tx);
    seen_.insert(digest_key(tx.digest));
    return true;
}

std::vector<Transaction> Mempool::drain(std::size_t batch_size) {
    if (pending_.empty()) {
        throw EmptyPoolError("mempool is empty");
    }
    const std::size_t take = std::min(batch_size, pending_.size());
    std::vector<Transaction> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        seen_.erase(digest_key(pending_.front().digest));
        out.push_back(std::move(pending_.front()));
        pending_.pop_front();
    }
    return out;
}

Block assemble_block(Mempool& pool, const Block& chain_head, std::size_t batch_size) {
    Block block;
    block.transactions = pool.drain(batch_size);
    block.height = chain_head.height + 1;
    block.prev_digest = chain_head.digest();
    block.tx_root = compute_tx_root(block.transactions);
    // approval_sum / verification_sum stay at the identity until the
    // consensus phases fill them in.
    return block;
}

const char* to_string(AppendResult result) {
    switch (result) {
        case AppendResult::appended: return "appended";
        case AppendResult::link_mismatch: return "link mismatch";
        case AppendResult::root_mismatch: return "root mismatch";
        case AppendResult::consensus_artifact_invalid: return "consensus artifact invalid";
        case AppendResult::insufficient_approvers: return "insufficient approvers";
    }
    return "unknown";
}

Block Chain::make_genesis(const math::GroupElement& public_key) {
    Block genesis;
    genesis.height = 0;
    genesis.prev_digest.fill(0);
    genesis.tx_root = compute_tx_root({});
    genesis.approval_sum = public_key;
    genesis.verification_sum = public_key;
    return genesis;
}

Chain::Chain(const math::GroupElement& public_key, std::size_t min_approvers)
    : public_key_(public_key), min_approvers_(min_approvers) {
    blocks_.push_back(make_genesis(public_key));
}

AppendResult Chain::check_against(const Block& head, const Block& block) const {
    if (block.height != head.height + 1 || block.prev_digest != head.digest()) {
        return AppendResult::link_mismatch;
    }
    for (const Transaction& tx : block.transactions) {
        if (!tx.digest_matches() || !tx.payload.valid()) {
            return AppendResult::root_mismatch;
        }
    }
    if (compute_tx_root(block.transactions) != block.tx_root) {
        return AppendResult::root_mismatch;
    }
    if (block.approver_ids.size() < min_approvers_) {
        return AppendResult::insufficient_approvers;
    }
    if (!(block.approval_sum == public_key_) || !(block.verification_sum == public_key_)) {
        return AppendResult::consensus_artifact_invalid;
    }
    return AppendResult::appended;
}

AppendResult Chain::append(Block block) {
    const AppendResult result = check_against(blocks_.back(), block);
    if (result == AppendResult::appended) {
        blocks_.push_back(std::move(block));
    }
    return result;
}

ChainValidation Chain::validate() const {
    const Block& genesis = blocks_.front();
    Digest zero;
    zero.fill(0);
    if (genesis.height != 0 || genesis.prev_digest != zero || !genesis.transactions.empty() ||
        genesis.tx_root != compute_tx_root({}) || !(genesis.approval_sum == public_key_) ||
        !(genesis.verification_sum == public_key_)) {
        return {false, 0};
    }
    for (std::size_t i = 1; i < blocks_.size(); ++i) {
        if (check_against(blocks_[i - 1], blocks_[i]) != AppendResult::appended) {
            return {false, blocks_[i].height};
        }
    }
    return {true, 0};
}

std::vector<std::uint8_t> encode_block(const Block& block) {
    std::vector<std::uint8_t> out = block.header_bytes();
    put_u32(out, static_cast<std::uint32_t>(block.transactions.size()));
    for (const Transaction& tx : block.transactions) {
        const std::vector<std::uint8_t> bytes = tx.canonical_bytes();
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    return out;
}

Block decode_block(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    Block block;
    block.height = r.u64();
    block.prev_digest = r.digest();
    block.tx_root = r.digest();
    const std::uint16_t approvers = r.u16();
    block.approver_ids.reserve(approvers);
    for (std::uint16_t i = 0; i < approvers; ++i) block.approver_ids.push_back(r.u64());
    block.approval_sum = r.element();
    block.verification_sum = r.element();
    const std::uint32_t tx_count = r.u32();
    block.transactions.reserve(tx_count);
    for (std::uint32_t i = 0; i < tx_count; ++i) {
        Transaction tx;
        tx.payload.object_tag = r.u64();
        tx.payload.epoch_s = r.f64();
        for (double& v : tx.payload.position_km) v = r.f64();
        for (double& v : tx.payload.velocity_km_s) v = r.f64();
        for (double& v : tx.payload.uncertainty_km) v = r.f64();
        tx.originator_id = r.u64();
        tx.created_at_s = r.f64();
        tx.digest = Sha256::hash(tx.canonical_bytes());
        block.transactions.push_back(std::move(tx));
    }
    r.finish();
    return block;
}

namespace {

constexpr char kChainMagic[8] = {'O', 'L', 'C', 'H', 'A', 'I', 'N', '1'};

} // namespace

void Chain::export_to(const std::filesystem::path& log_path, const std::filesystem::path& index_path) const {
    std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
    if (!log) {
        throw ChainIoError("cannot open " + log_path.string() + " for writing");
    }
    std::vector<std::uint8_t> header;
    header.insert(header.end(), kChainMagic, kChainMagic + sizeof(kChainMagic));
    header.push_back(1); // format version
    put_element(header, public_key_);
    put_u16(header, static_cast<std::uint16_t>(min_approvers_));
    put_u32(header, static_cast<std::uint32_t>(blocks_.size()));
    put_digest(header, Sha256::hash(header)); // header self-check
    log.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));

    std::ofstream index(index_path, std::ios::trunc);
    if (!index) {
        throw ChainIoError("cannot open " + index_path.string() + " for writing");
    }
    for (const Block& block : blocks_) {
        const std::vector<std::uint8_t> body = encode_block(block);
        std::vector<std::uint8_t> record;
        put_u32(record, static_cast<std::uint32_t>(body.size()));
        put_digest(record, block.digest());
        record.insert(record.end(), body.begin(), body.end());
        log.write(reinterpret_cast<const char*>(record.data()), static_cast<std::streamsize>(record.size()));

        index << "{\"height\":" << block.height << ",\"digest\":\"" << to_hex(block.digest())
              << "\",\"tx_count\":" << block.transactions.size() << "}\n";
    }
}

Chain Chain::import_from(const std::filesystem::path& log_path) {
    std::ifstream log(log_path, std::ios::binary);
    if (!log) {
        throw ChainIoError("cannot open " + log_path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(log)), std::istreambuf_iterator<char>());
    Reader header(bytes);
    for (char expected : kChainMagic) {
        if (header.u8() != static_cast<std::uint8_t>(expected)) {
            throw ChainIoError("bad chain magic in " + log_path.string());
        }
    }
    const std::uint8_t version = header.u8();
    if (version != 1) {
        throw ChainIoError("unsupported chain format version " + std::to_string(version));
    }
    const math::GroupElement public_key = header.element();
    const std::uint16_t min_approvers = header.u16();
    const std::uint32_t block_count = header.u32();
    const std::size_t checked_bytes = header.offset();
    const Digest stored_header_digest = header.digest();
    if (Sha256::hash(std::span<const std::uint8_t>(bytes).first(checked_bytes)) != stored_header_digest) {
        throw ChainIoError("chain header checksum mismatch in " + log_path.string());
    }

    std::size_t offset = header.offset();
    std::vector<Block> blocks;
    blocks.reserve(block_count);
    for (std::uint32_t i = 0; i < block_count; ++i) {
        Reader record(std::span<const std::uint8_t>(bytes).subspan(offset));
        const std::uint32_t body_len = record.u32();
        const Digest stored_digest = record.digest();
        if (offset + 36 + body_len > bytes.size()) {
            throw ChainIoError("block record truncated at byte offset " + std::to_string(offset));
        }
        const Block block = decode_block(std::span<const std::uint8_t>(bytes).subspan(offset + 36, body_len));
        if (block.digest() != stored_digest) {
            throw ChainIoError("stored digest mismatch at height " + std::to_string(block.height));
        }
        blocks.push_back(block);
        offset += 36 + body_len;
    }
    if (offset != bytes.size()) {
        throw ChainIoError("trailing bytes after last block at offset " + std::to_string(offset));
    }
    if (blocks.empty()) {
        throw ChainIoError("chain log has no genesis block");
    }

    Chain chain(public_key, min_approvers);
    chain.blocks_ = std::move(blocks);
    return chain;
}

} // namespace orbitledger::ledger
