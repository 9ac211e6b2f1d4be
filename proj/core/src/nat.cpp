#include "goi/nat.hpp"

#include <boost/functional/hash.hpp>

#include "goi/errors.hpp"

namespace goi {

namespace mp = boost::multiprecision;

std::size_t NatHash::operator()(const Nat& n) const noexcept {
  return boost::hash<Nat>{}(n);
}

Nat pow2(std::size_t k) {
  Nat result = 1;
  result <<= k;
  return result;
}

std::size_t nu2(const Nat& n) {
  if (n <= 0) {
    throw ArgumentError("nu2 is undefined at " + to_string(n));
  }
  return static_cast<std::size_t>(mp::lsb(n));
}

bool in_class(const Nat& n, std::size_t bits, const Nat& residue) {
  if (bits == 0) {
    return true;
  }
  // Low limb fast path; residues of narrow classes always fit in one limb.
  constexpr std::size_t limb_bits = sizeof(mp::limb_type) * 8;
  if (bits < limb_bits && n >= 0) {
    const mp::limb_type mask = (mp::limb_type{1} << bits) - 1;
    return (n.backend().limbs()[0] & mask) == residue.backend().limbs()[0];
  }
  Nat mask = pow2(bits) - 1;
  return (n & mask) == residue;
}

std::size_t bit_length(const Nat& n) {
  if (n <= 0) {
    return 0;
  }
  return static_cast<std::size_t>(mp::msb(n)) + 1;
}

std::string to_string(const Nat& n) { return n.str(); }

std::string to_string(const MaybeNat& n) { return n ? n->str() : std::string("⊥"); }

Nat parse_nat(std::string_view digits) {
  if (digits.empty()) {
    throw ArgumentError("expected a natural number, got an empty string");
  }
  Nat value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw ArgumentError("not a natural number: '" + std::string(digits) + "'");
    }
    value *= 10;
    value += c - '0';
  }
  return value;
}

std::size_t to_size(const Nat& n, std::size_t limit) {
  if (n < 0 || n > limit) {
    throw ArgumentError("value " + to_string(n) + " exceeds the supported limit " +
                        std::to_string(limit));
  }
  return static_cast<std::size_t>(n);
}

}  // namespace goi
