#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cdc {

/// A string of bits with explicit length, packed LSB-first within each byte:
/// bit i lives at (bytes[i >> 3] >> (i & 7)) & 1. Splits of an intermediate
/// value into r parts are bit slices, so lengths are not byte-aligned in
/// general (T need only be divisible by lcm(1..r)).
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t bit_count);  // zero-filled

  std::size_t bit_size() const { return bit_count_; }
  bool empty() const { return bit_count_ == 0; }

  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool value);

  /// XOR in another string of identical length.
  void xor_with(const BitString& other);

  /// Bits [offset, offset + length).
  BitString slice(std::size_t offset, std::size_t length) const;

  /// Copy `part` over bits [offset, offset + part.bit_size()).
  void overwrite(std::size_t offset, const BitString& part);

  bool is_zero() const;

  /// Lowercase hex of the packed bytes, low byte first; unused high bits of
  /// the final byte are always zero.
  std::string to_hex() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.bit_count_ == b.bit_count_ && a.bytes_ == b.bytes_;
  }
  friend bool operator!=(const BitString& a, const BitString& b) { return !(a == b); }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  /// Set byte j (bits [8j, 8j+8)); bits past bit_size() are masked off.
  void set_byte(std::size_t j, std::uint8_t value);

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

}  // namespace cdc
