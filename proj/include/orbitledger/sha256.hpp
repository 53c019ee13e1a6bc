#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace orbitledger {

using Digest = std::array<std::uint8_t, 32>;

// Incremental SHA-256 (FIPS 180-4). The ledger's only hash; keeping it
// in-repo pins digests byte-for-byte across toolchains.
class Sha256 {
  public:
    Sha256();

    void update(std::span<const std::uint8_t> data);
    Digest finish();

    static Digest hash(std::span<const std::uint8_t> data);

  private:
    void process_block(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::size_t buffered_ = 0;
    std::uint64_t total_bytes_ = 0;
};

std::string to_hex(const Digest& digest);

} // namespace orbitledger
