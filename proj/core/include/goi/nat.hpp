#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace goi {

// Unbounded natural number. The backing type is signed because Boost does not
// provide an unbounded unsigned cpp_int; every public entry point treats a
// negative argument as outside the carrier.
using Nat = boost::multiprecision::cpp_int;
using MaybeNat = std::optional<Nat>;

struct NatHash {
  std::size_t operator()(const Nat& n) const noexcept;
};

// 2^k
Nat pow2(std::size_t k);

// Largest k with 2^k dividing n. Throws ArgumentError for n == 0.
std::size_t nu2(const Nat& n);

// True iff n is congruent to residue modulo 2^bits.
bool in_class(const Nat& n, std::size_t bits, const Nat& residue);

// Number of significant bits; bit_length(0) == 0.
std::size_t bit_length(const Nat& n);

std::string to_string(const Nat& n);
std::string to_string(const MaybeNat& n);  // "⊥" when empty

// Decimal digits only. Throws ArgumentError otherwise.
Nat parse_nat(std::string_view digits);

// Narrowing used for exponents and step counts. Throws ArgumentError when the
// value does not fit below limit.
std::size_t to_size(const Nat& n, std::size_t limit);

}  // namespace goi
