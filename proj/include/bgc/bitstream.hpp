#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bgc/errors.hpp"

namespace bgc {

// Append-only bit buffer, most-significant-bit-first within bytes. The final
// byte is implicitly zero-padded.
class BitWriter {
 public:
  void put_bit(bool bit) {
    const unsigned off = static_cast<unsigned>(bit_count_ & 7);
    if (off == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> off);
    ++bit_count_;
  }

  // Low `count` bits of value, highest first. count <= 64.
  void put_bits(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i-- > 0;) put_bit((value >> i) & 1u);
  }

  void put_ones(std::uint64_t count) {
    while (count > 0 && (bit_count_ & 7) != 0) {
      put_bit(true);
      --count;
    }
    for (; count >= 8; count -= 8) {
      bytes_.push_back(0xff);
      bit_count_ += 8;
    }
    while (count-- > 0) put_bit(true);
  }

  void put_zeros(std::uint64_t count) {
    while (count > 0 && (bit_count_ & 7) != 0) {
      put_bit(false);
      --count;
    }
    for (; count >= 8; count -= 8) {
      bytes_.push_back(0);
      bit_count_ += 8;
    }
    while (count-- > 0) put_bit(false);
  }

  std::uint64_t bit_count() const noexcept { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_count_ = 0;
};

// Sequential reader over an MSB-first bit buffer. Reading past the end
// raises CorruptStreamError.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_count)
      : bytes_(bytes), size_(bit_count) {}

  bool get_bit() {
    if (pos_ >= size_) throw CorruptStreamError("bit stream exhausted");
    const bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
    ++pos_;
    return bit;
  }

  std::uint64_t get_bits(unsigned count) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) v = (v << 1) | static_cast<std::uint64_t>(get_bit());
    return v;
  }

  std::uint64_t position() const noexcept { return pos_; }
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t remaining() const noexcept { return size_ - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t size_;
  std::uint64_t pos_ = 0;
};

}  // namespace bgc
