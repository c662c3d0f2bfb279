#include "cdc/bitstring.hpp"

#include <stdexcept>

namespace cdc {

BitString::BitString(std::size_t bit_count)
    : bytes_((bit_count + 7) / 8, 0), bit_count_(bit_count) {}

bool BitString::bit(std::size_t i) const {
  if (i >= bit_count_) {
    throw std::out_of_range("BitString::bit");
  }
  return (bytes_[i >> 3] >> (i & 7)) & 1;
}

void BitString::set_bit(std::size_t i, bool value) {
  if (i >= bit_count_) {
    throw std::out_of_range("BitString::set_bit");
  }
  const std::uint8_t mask = static_cast<std::uint8_t>(1u << (i & 7));
  if (value) {
    bytes_[i >> 3] |= mask;
  } else {
    bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }
}

void BitString::xor_with(const BitString& other) {
  if (other.bit_count_ != bit_count_) {
    throw std::invalid_argument("BitString::xor_with: length mismatch");
  }
  for (std::size_t i = 0; i < bytes_.size(); ++i) {
    bytes_[i] ^= other.bytes_[i];
  }
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > bit_count_) {
    throw std::out_of_range("BitString::slice");
  }
  BitString out(length);
  if ((offset & 7) == 0) {
    // Byte-aligned: copy, then mask the tail.
    const std::size_t first = offset >> 3;
    for (std::size_t i = 0; i < out.bytes_.size(); ++i) {
      out.bytes_[i] = bytes_[first + i];
    }
    const std::size_t spare = out.bytes_.size() * 8 - length;
    if (spare > 0) {
      out.bytes_.back() &= static_cast<std::uint8_t>(0xFFu >> spare);
    }
  } else {
    for (std::size_t i = 0; i < length; ++i) {
      out.set_bit(i, bit(offset + i));
    }
  }
  return out;
}

void BitString::overwrite(std::size_t offset, const BitString& part) {
  if (offset + part.bit_count_ > bit_count_) {
    throw std::out_of_range("BitString::overwrite");
  }
  for (std::size_t i = 0; i < part.bit_count_; ++i) {
    set_bit(offset + i, part.bit(i));
  }
}

bool BitString::is_zero() const {
  for (const auto b : bytes_) {
    if (b != 0) {
      return false;
    }
  }
  return true;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (const auto b : bytes_) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

void BitString::set_byte(std::size_t j, std::uint8_t value) {
  if (j >= bytes_.size()) {
    throw std::out_of_range("BitString::set_byte");
  }
  bytes_[j] = value;
  const std::size_t spare = bytes_.size() * 8 - bit_count_;
  if (j + 1 == bytes_.size() && spare > 0) {
    bytes_[j] &= static_cast<std::uint8_t>(0xFFu >> spare);
  }
}

}  // namespace cdc
