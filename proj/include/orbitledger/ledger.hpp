#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "orbitledger/group.hpp"
#include "orbitledger/sha256.hpp"

namespace orbitledger::ledger {

// One optical tracking record: what a satellite reports about a debris
// object every measurement cycle.
struct DebrisObservation {
    std::uint64_t object_tag = 0;
    double epoch_s = 0.0;                           // simulation clock
    std::array<double, 3> position_km{};            // ECI
    std::array<double, 3> velocity_km_s{};
    std::array<double, 3> uncertainty_km{};         // 1-sigma per axis

    // Earth-orbiting debris stays well under 11 km/s; uncertainties are
    // standard deviations and cannot be negative.
    bool valid() const;
};

struct Transaction {
    DebrisObservation payload;
    std::uint64_t originator_id = 0;
    double created_at_s = 0.0;
    Digest digest{};

    static Transaction make(const DebrisObservation& payload, std::uint64_t originator_id, double created_at_s);

    // tag 8 | epoch 8 | position 3*8 | velocity 3*8 | uncertainty 3*8
    // | originator 8 | created_at 8, all little-endian. 104 bytes.
    std::vector<std::uint8_t> canonical_bytes() const;
    bool digest_matches() const;
};

inline constexpr std::size_t kTransactionBytes = 104;
inline constexpr std::size_t kDefaultBatchSize = 500;

struct Block {
    std::uint64_t height = 0;
    Digest prev_digest{};
    Digest tx_root{};
    std::vector<std::uint64_t> approver_ids;
    math::GroupElement approval_sum;      // sum of c_k; unset until consensus
    math::GroupElement verification_sum;  // sum of d_k
    std::vector<Transaction> transactions;

    // Digest over the link fields (height, previous digest, tx root,
    // approver roster); transactions are pinned through tx_root and the
    // consensus sums are checked directly against the network public key,
    // which lets a proposer link the next block before the sums land.
    Digest digest() const;
    std::vector<std::uint8_t> link_bytes() const;
    std::vector<std::uint8_t> header_bytes() const;
};

Digest compute_tx_root(std::span<const Transaction> transactions);

// FIFO queue of pending transactions with digest dedup and a hard capacity
// (backpressure for the submitter).
class Mempool {
  public:
    explicit Mempool(std::size_t capacity = 10 * kDefaultBatchSize);

    // False on duplicate digest or malformed payload; throws PoolFullError
    // at capacity.
    bool submit(const Transaction& tx);
    std::size_t size() const { return pending_.size(); }
    std::size_t capacity() const { return capacity_; }

    // Drains up to batch_size transactions in FIFO order; throws
    // EmptyPoolError when nothing is pending.
    std::vector<Transaction> drain(std::size_t batch_size);

  private:
    std::size_t capacity_;
    std::deque<Transaction> pending_;
    std::unordered_set<std::string> seen_;
};

Block assemble_block(Mempool& pool, const Block& chain_head, std::size_t batch_size = kDefaultBatchSize);

enum class AppendResult : std::uint8_t {
    appended = 0,
    link_mismatch = 1,
    root_mismatch = 2,
    consensus_artifact_invalid = 3,
    insufficient_approvers = 4,
};

const char* to_string(AppendResult result);

struct ChainValidation {
    bool valid = true;
    std::uint64_t first_invalid_height = 0; // meaningful when !valid
};

// Append-only hash-linked chain. Genesis is height 0, all-zero previous
// digest, no transactions, and both consensus sums set to the public key.
class Chain {
  public:
    Chain(const math::GroupElement& public_key, std::size_t min_approvers);

    const math::GroupElement& public_key() const { return public_key_; }
    std::size_t min_approvers() const { return min_approvers_; }
    const Block& head() const { return blocks_.back(); }
    std::span<const Block> blocks() const { return blocks_; }
    std::uint64_t height() const { return blocks_.back().height; }

    AppendResult append(Block block);
    ChainValidation validate() const;

    void export_to(const std::filesystem::path& log_path, const std::filesystem::path& index_path) const;
    static Chain import_from(const std::filesystem::path& log_path);

  private:
    static Block make_genesis(const math::GroupElement& public_key);
    AppendResult check_against(const Block& head, const Block& block) const;

    math::GroupElement public_key_;
    std::size_t min_approvers_;
    std::vector<Block> blocks_;
};

std::vector<std::uint8_t> encode_block(const Block& block);
Block decode_block(std::span<const std::uint8_t> bytes);

} // namespace orbitledger::ledger
