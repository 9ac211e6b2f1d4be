#pragma once

// Registry of named algebraic laws and a runner that checks them on a prefix
// [0, bound) for the generator suite plus seeded random finite maps.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "goi/pinj.hpp"

namespace goi::lawcheck {

// One side-by-side comparison produced by a law for a given instantiation.
struct Equation {
  std::string label;
  PartialInjection lhs;
  PartialInjection rhs;
};

// A map bound to a law variable, with a name that parses back in the term
// language ("p", "tau", "{0->3, 2->1}", ...).
struct NamedMap {
  std::string name;
  PartialInjection map;
};

struct LawSpec {
  std::string name;
  std::string statement;
  std::size_t arity = 0;
  std::uint64_t default_bound = 4096;
  // Given the instantiated variables and the bound, the equations to compare
  // pointwise on [0, bound).
  std::function<std::vector<Equation>(std::span<const PartialInjection>, std::uint64_t)> builder;
};

struct Witness {
  std::vector<std::string> inputs;
  std::string equation;
  Nat point;
  MaybeNat lhs;
  MaybeNat rhs;
  std::string error;  // set when evaluation threw instead of returning
};

struct LawReport {
  std::string law;
  std::uint64_t bound = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  CheckOutcome outcome = HoldsExactly{};
  std::chrono::milliseconds elapsed{0};
  std::vector<Witness> witnesses;
};

inline constexpr std::size_t default_samples = 100;
inline constexpr std::size_t max_witnesses = 8;

// Stable order; names are unique.
const std::vector<LawSpec>& registry();
// Throws UnknownLawError.
const LawSpec& find_law(const std::string& name);

// The fixed part of every instantiation: p, q, tau, sigma, id, zero.
std::vector<NamedMap> generator_suite();

// Uniform partial injection with `size` pairs, inputs and outputs below
// value_bound. Deterministic per seed.
PartialInjection random_finite(std::uint64_t seed, std::size_t size, std::uint64_t value_bound);

// Variable tuples for a law: generator tuples first, then `samples` tuples of
// seeded random finite maps.
std::vector<std::vector<NamedMap>> instantiations(std::size_t arity, std::size_t samples,
                                                  std::uint64_t seed);

// bound == 0 selects the law's default bound.
LawReport run_law(const LawSpec& law, std::uint64_t bound, std::size_t samples, std::uint64_t seed);
LawReport run_law(const std::string& name, std::uint64_t bound, std::size_t samples,
                  std::uint64_t seed);

// {law, bound, samples, seed, verdict, witnesses: [{inputs, point, lhs, rhs}], elapsed_ms}
std::string to_json(const LawReport& report, int indent = -1);
std::string to_json(const std::vector<LawReport>& reports, int indent = -1);

// One TSV line: law, verdict, bound, samples, seed, elapsed_ms.
std::string to_tsv(const LawReport& report);

}  // namespace goi::lawcheck
