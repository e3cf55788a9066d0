#include <stdexcept>
#include <string>

#include "ncga/error.hpp"
#include "ncga/galois.hpp"

namespace ncga::gf {

namespace {

std::uint32_t polynomial_for(unsigned q) {
  switch (q) {
    case 4: return 0x13;      // x^4 + x + 1
    case 8: return 0x11B;     // x^8 + x^4 + x^3 + x + 1
    case 16: return 0x1100B;  // x^16 + x^12 + x^3 + x + 1
    default: throw std::invalid_argument("unsupported field exponent q=" + std::to_string(q));
  }
}

}  // namespace

const Field& Field::get(unsigned q) {
  static const Field f4(4), f8(8), f16(16);
  switch (q) {
    case 4: return f4;
    case 8: return f8;
    case 16: return f16;
    default: throw std::invalid_argument("unsupported field exponent q=" + std::to_string(q));
  }
}

Field::Field(unsigned q) : q_(q), poly_(polynomial_for(q)) {
  if (q_ == 8) {
    table_.resize(1u << 16);
    for (std::uint32_t a = 0; a < 256; ++a) {
      for (std::uint32_t b = 0; b < 256; ++b) table_[(a << 8) | b] = static_cast<std::uint8_t>(slow_mul(a, b));
    }
  }
  if (q_ <= 8) {
    inverse_.assign(order(), 0);
    for (std::uint32_t a = 1; a < order(); ++a) {
      for (std::uint32_t b = 1; b < order(); ++b) {
        if (mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) == 1) {
          inverse_[a] = static_cast<Symbol>(b);
          break;
        }
      }
    }
  }
}

Symbol Field::slow_mul(Symbol a, Symbol b) const {
  std::uint32_t x = a, y = b, product = 0;
  const std::uint32_t top = 1u << q_;
  while (y != 0) {
    if (y & 1u) product ^= x;
    y >>= 1;
    x <<= 1;
    if (x & top) x ^= poly_;
  }
  return static_cast<Symbol>(product);
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
  if (q_ <= 8) return inverse_[a];
  // a^(2^q - 2)
  Symbol result = 1, base = a;
  for (std::uint32_t e = order() - 2; e != 0; e >>= 1) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
  }
  return result;
}

void Field::axpy(std::span<Symbol> dst, std::span<const Symbol> src, Symbol c) const {
  if (c == 0) return;
  const std::size_t n = std::min(dst.size(), src.size());
  if (q_ == 8) {
    const std::uint8_t* row = table_.data() + (static_cast<std::size_t>(c) << 8);
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= mul(c, src[i]);
}

void Field::scale(std::span<Symbol> row, Symbol c) const {
  if (q_ == 8) {
    const std::uint8_t* t = table_.data() + (static_cast<std::size_t>(c) << 8);
    for (Symbol& x : row) x = t[x];
    return;
  }
  for (Symbol& x : row) x = mul(c, x);
}

void Field::axpy_bytes(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) const {
  if (q_ != 8) throw std::logic_error("byte regions need q = 8");
  if (c == 0) return;
  const std::uint8_t* row = table_.data() + (static_cast<std::size_t>(c) << 8);
  const std::size_t n = std::min(dst.size(), src.size());
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
}

void Field::scale_bytes(std::span<std::uint8_t> row, std::uint8_t c) const {
  if (q_ != 8) throw std::logic_error("byte regions need q = 8");
  const std::uint8_t* t = table_.data() + (static_cast<std::size_t>(c) << 8);
  for (std::uint8_t& x : row) x = t[x];
}

namespace {

void check_same_field(const GfElement& a, const GfElement& b) {
  if (a.q != b.q) {
    throw FieldMismatch("GF(2^" + std::to_string(a.q) + ") vs GF(2^" + std::to_string(b.q) + ")");
  }
}

}  // namespace

GfElement gf_add(GfElement a, GfElement b) {
  check_same_field(a, b);
  return {a.value ^ b.value, a.q};
}

GfElement gf_mul(GfElement a, GfElement b) {
  check_same_field(a, b);
  const Field& f = Field::get(a.q);
  return {f.mul(static_cast<Symbol>(a.value), static_cast<Symbol>(b.value)), a.q};
}

GfElement gf_inv(GfElement a) { return {Field::get(a.q).inv(static_cast<Symbol>(a.value)), a.q}; }

}  // namespace ncga::gf
