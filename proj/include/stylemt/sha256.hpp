#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace stylemt {

// Minimal SHA-256 (FIPS 180-4). Used for content-addressed cache keys,
// prompt hashes and corpus fingerprints; not a general crypto facility.
class Sha256 {
 public:
  Sha256();

  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }

  // Finalizes and returns the 32-byte digest. The object must not be
  // updated afterwards.
  std::array<std::uint8_t, 32> digest();

  // One-shot convenience: lowercase hex digest of `s`.
  static std::string hex(std::string_view s);

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::uint64_t bit_count_ = 0;
  std::size_t buffer_len_ = 0;
};

std::string to_hex(const std::array<std::uint8_t, 32>& digest);

}  // namespace stylemt
