#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "bgc/bitstream.hpp"
#include "bgc/errors.hpp"

namespace bgc {

enum class CodeKind : std::uint8_t { unary = 0, gamma = 1, delta = 2, zeta = 3 };

inline const char* code_kind_name(CodeKind k) {
  switch (k) {
    case CodeKind::unary: return "unary";
    case CodeKind::gamma: return "gamma";
    case CodeKind::delta: return "delta";
    case CodeKind::zeta: return "zeta";
  }
  return "?";
}

// Codec knobs. The residual code applies to residual gap values only;
// degrees, reference offsets and residual counts are always gamma-coded.
struct CodeParams {
  CodeKind residual_code = CodeKind::zeta;
  std::uint8_t zeta_k = 3;     // shrink parameter, >= 1
  std::uint16_t window = 8;    // W: how many predecessors are tried as reference
  std::uint8_t max_chain = 3;  // L: reference chain depth cap (0 disables referencing)
};

namespace detail {

// All prefix codes below transport x >= 0 as v = x + 1 >= 1.
// Bounds: v < 2^63 and zeta_k in [1, 62] keep the interval arithmetic exact.

inline void check_code_input(std::uint64_t x, unsigned zeta_k) {
  if (x >= (std::uint64_t{1} << 62)) throw std::invalid_argument("coded value out of range");
  if (zeta_k < 1 || zeta_k > 62) throw std::invalid_argument("zeta k out of range");
}

inline void put_gamma(BitWriter& w, std::uint64_t v) {
  const unsigned b = static_cast<unsigned>(std::bit_width(v)) - 1;
  w.put_zeros(b);
  w.put_bits(v, b + 1);
}

inline std::uint64_t get_gamma(BitReader& r) {
  unsigned b = 0;
  while (!r.get_bit()) {
    if (++b > 63) throw CorruptStreamError("gamma prefix too long");
  }
  return b == 0 ? 1 : (std::uint64_t{1} << b) | r.get_bits(b);
}

inline std::uint64_t gamma_length(std::uint64_t v) {
  return 2 * (static_cast<std::uint64_t>(std::bit_width(v)) - 1) + 1;
}

inline void put_delta(BitWriter& w, std::uint64_t v) {
  const unsigned b = static_cast<unsigned>(std::bit_width(v)) - 1;
  put_gamma(w, b + 1);
  w.put_bits(v, b);  // mantissa without the leading 1
}

inline std::uint64_t get_delta(BitReader& r) {
  const std::uint64_t b = get_gamma(r) - 1;
  if (b > 63) throw CorruptStreamError("delta exponent too large");
  return b == 0 ? 1 : (std::uint64_t{1} << b) | r.get_bits(static_cast<unsigned>(b));
}

inline std::uint64_t delta_length(std::uint64_t v) {
  const std::uint64_t b = static_cast<std::uint64_t>(std::bit_width(v)) - 1;
  return gamma_length(b + 1) + b;
}

// Minimal binary (phase-in) code for a value in [0, range).
inline unsigned minimal_binary_width(unsigned __int128 range) {
  unsigned s = 0;
  while ((static_cast<unsigned __int128>(1) << s) < range) ++s;
  return s;  // ceil(log2 range); 0 when range == 1
}

// Values always fit 64 bits; the field may be wider for large zeta k.
inline void put_wide_bits(BitWriter& w, unsigned __int128 value, unsigned count) {
  if (count > 64) {
    w.put_zeros(count - 64);
    count = 64;
  }
  w.put_bits(static_cast<std::uint64_t>(value), count);
}

inline void put_minimal_binary(BitWriter& w, std::uint64_t m, unsigned __int128 range) {
  const unsigned s = minimal_binary_width(range);
  const unsigned __int128 thresh = (static_cast<unsigned __int128>(1) << s) - range;
  if (m < thresh)
    put_wide_bits(w, m, s - 1);
  else
    put_wide_bits(w, m + thresh, s);
}

inline unsigned __int128 get_minimal_binary(BitReader& r, unsigned __int128 range) {
  const unsigned s = minimal_binary_width(range);
  if (s == 0) return 0;
  const unsigned __int128 thresh = (static_cast<unsigned __int128>(1) << s) - range;
  unsigned __int128 m = 0;
  for (unsigned i = 0; i + 1 < s; ++i) m = (m << 1) | static_cast<unsigned>(r.get_bit());
  if (m < thresh) return m;
  m = (m << 1) | static_cast<unsigned>(r.get_bit());
  return m - thresh;
}

inline std::uint64_t minimal_binary_length(std::uint64_t m, unsigned __int128 range) {
  const unsigned s = minimal_binary_width(range);
  const unsigned __int128 thresh = (static_cast<unsigned __int128>(1) << s) - range;
  return m < thresh ? s - 1 : s;
}

// zeta_k(v): with h = floor(floor(log2 v) / k), the prefix is h ones and a
// zero, then the minimal binary index of v inside [2^(hk), 2^((h+1)k)).
inline void put_zeta(BitWriter& w, std::uint64_t v, unsigned k) {
  const unsigned b = static_cast<unsigned>(std::bit_width(v)) - 1;
  const unsigned h = b / k;
  w.put_ones(h);
  w.put_bit(false);
  const unsigned __int128 lo = static_cast<unsigned __int128>(1) << (h * k);
  const unsigned __int128 hi = static_cast<unsigned __int128>(1) << ((h + 1) * k);
  put_minimal_binary(w, v - static_cast<std::uint64_t>(lo), hi - lo);
}

inline std::uint64_t get_zeta(BitReader& r, unsigned k) {
  unsigned h = 0;
  while (r.get_bit()) {
    if (++h > 62 / k) throw CorruptStreamError("zeta prefix too long");
  }
  const unsigned __int128 lo = static_cast<unsigned __int128>(1) << (h * k);
  const unsigned __int128 hi = static_cast<unsigned __int128>(1) << ((h + 1) * k);
  const unsigned __int128 v = lo + get_minimal_binary(r, hi - lo);
  if (v >= (static_cast<unsigned __int128>(1) << 63)) throw CorruptStreamError("zeta value overflow");
  return static_cast<std::uint64_t>(v);
}

inline std::uint64_t zeta_length(std::uint64_t v, unsigned k) {
  const unsigned b = static_cast<unsigned>(std::bit_width(v)) - 1;
  const unsigned h = b / k;
  const unsigned __int128 lo = static_cast<unsigned __int128>(1) << (h * k);
  const unsigned __int128 hi = static_cast<unsigned __int128>(1) << ((h + 1) * k);
  return h + 1 + minimal_binary_length(v - static_cast<std::uint64_t>(lo), hi - lo);
}

}  // namespace detail

// Writes x >= 0 with the requested prefix-free code.
//   unary: x ones then a zero.
//   gamma(v=x+1): floor(log2 v) zeros, then v's bits.
//   delta(v): gamma(floor(log2 v) + 1), then v's mantissa.
//   zeta_k(v): see detail::put_zeta.
inline void put_code(BitWriter& w, std::uint64_t x, CodeKind kind, unsigned zeta_k = 3) {
  detail::check_code_input(x, zeta_k);
  switch (kind) {
    case CodeKind::unary:
      w.put_ones(x);
      w.put_bit(false);
      break;
    case CodeKind::gamma: detail::put_gamma(w, x + 1); break;
    case CodeKind::delta: detail::put_delta(w, x + 1); break;
    case CodeKind::zeta: detail::put_zeta(w, x + 1, zeta_k); break;
  }
}

inline std::uint64_t get_code(BitReader& r, CodeKind kind, unsigned zeta_k = 3) {
  switch (kind) {
    case CodeKind::unary: {
      std::uint64_t x = 0;
      while (r.get_bit()) ++x;
      return x;
    }
    case CodeKind::gamma: return detail::get_gamma(r) - 1;
    case CodeKind::delta: return detail::get_delta(r) - 1;
    case CodeKind::zeta: return detail::get_zeta(r, zeta_k) - 1;
  }
  throw std::invalid_argument("unknown code kind");
}

// Exact emitted width of put_code(x), in bits.
inline std::uint64_t code_length(std::uint64_t x, CodeKind kind, unsigned zeta_k = 3) {
  detail::check_code_input(x, zeta_k);
  switch (kind) {
    case CodeKind::unary: return x + 1;
    case CodeKind::gamma: return detail::gamma_length(x + 1);
    case CodeKind::delta: return detail::delta_length(x + 1);
    case CodeKind::zeta: return detail::zeta_length(x + 1, zeta_k);
  }
  throw std::invalid_argument("unknown code kind");
}

}  // namespace bgc
