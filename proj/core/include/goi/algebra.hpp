#pragma once

// Named maps and operators over End(ℕ): the Cantor pairing and the ⋆ tensor,
// the generators of the dynamical algebra, the exponential bijection ψ with
// the ⊙ tensor, bang/whimper, the r_j family and the execution formula.
//
// Words in the generators are written with functional composition, so the
// relation "p then p‡ is the identity" is compose(gen_p_dag(), gen_p()).

#include <cstddef>
#include <vector>

#include "goi/pinj.hpp"

namespace goi {

// ---------------------------------------------------------------- ℕ ⊎ ℕ ≅ ℕ

struct SumIndex {
  Nat n;
  unsigned tag = 0;  // 0 or 1
  friend bool operator==(const SumIndex&, const SumIndex&) = default;
};

Nat cantor_code(const SumIndex& s);
SumIndex cantor_decode(const Nat& n);

// p(n) = 2n, q(n) = 2n+1 and their generalized inverses.
PartialInjection gen_p();
PartialInjection gen_q();
PartialInjection gen_p_dag();
PartialInjection gen_q_dag();

// A code/decode pair for ℕ ≅ ℕ ⊎ ℕ, given by its two injections: j0 is the
// code on the left summand and j1 on the right one. Both must be total with
// disjoint, jointly exhaustive ranges.
class SelfSimilarStructure {
 public:
  // Validates totality and the range split on [0, bound); exact when both
  // injections are prefix maps. Throws ArgumentError on failure.
  static SelfSimilarStructure make(PartialInjection j0, PartialInjection j1, const Nat& bound);

  const PartialInjection& j0() const { return j0_; }
  const PartialInjection& j1() const { return j1_; }
  bool is_cantor() const { return cantor_; }

  // Strips n by j1‡ until it leaves the range of j1. Returns the number of
  // strips and the remainder, or nothing if max_strips is exhausted or a
  // fixed point is hit.
  struct Stripped {
    std::size_t copies;
    Nat rest;
  };
  std::optional<Stripped> strip(const Nat& n, std::size_t max_strips) const;

  // Every n < bound strips to a point outside range(j1) within max_strips
  // steps. Fails carries the first residue point.
  CheckOutcome check_no_residue(const Nat& bound, std::size_t max_strips = 4096) const;

 private:
  friend SelfSimilarStructure default_structure();
  SelfSimilarStructure(PartialInjection j0, PartialInjection j1, bool cantor);

  PartialInjection j0_;
  PartialInjection j1_;
  bool cantor_ = false;
};

// j0 = p, j1 = q.
SelfSimilarStructure default_structure();

// ----------------------------------------------------------------------- ⋆

// result(2m) = 2·f(m), result(2m+1) = 2·g(m)+1. Prefix and finite operands
// stay symbolic.
PartialInjection star(const PartialInjection& f, const PartialInjection& g);

// j0∘f∘j0‡ ∨ j1∘g∘j1‡ over an arbitrary structure; the Cantor structure is
// routed to the direct form above.
PartialInjection star(const PartialInjection& f, const PartialInjection& g,
                      const SelfSimilarStructure& s);

// The same tensor assembled from the generators: p∘f∘p‡ ∨ q∘g∘q‡. Kept
// independent of star() so either can check the other.
PartialInjection star_via_join(const PartialInjection& f, const PartialInjection& g);

// Associator f⋆(g⋆h) → (f⋆g)⋆h and symmetry f⋆g → g⋆f:
//   τ(n) = 2n (n even), n+1 (n ≡ 1 mod 4), (n−1)/2 (n ≡ 3 mod 4)
//   σ(n) = n+1 (n even), n−1 (n odd)
PartialInjection tau_star();
PartialInjection sigma_star();

// ------------------------------------------------------------- ℕ × ℕ ≅ ℕ

struct ProdIndex {
  Nat x;  // payload
  Nat y;  // copy index
  friend bool operator==(const ProdIndex&, const ProdIndex&) = default;
};

// ψ(x, y) = 2^(y+1)·x + 2^y − 1, i.e. q^y(p(x)).
Nat psi(const ProdIndex& i);
// y = ν₂(n+1), x = ((n+1)/2^y − 1)/2.
ProdIndex psi_inv(const Nat& n);

// ψ over an arbitrary self-similar structure: ψ(x, y) = j1^y(j0(x)). Only
// structures passing the no-residue check can be used.
class Exponential {
 public:
  // Cantor structure; uses the closed forms above.
  Exponential();
  // Throws NoResidueError if the structure fails check_no_residue(bound).
  Exponential(SelfSimilarStructure s, const Nat& bound, std::size_t max_strips = 4096);

  Nat psi(const ProdIndex& i) const;
  // Throws NoResidueError if n cannot be stripped within the strip budget.
  ProdIndex psi_inv(const Nat& n) const;

  const SelfSimilarStructure& structure() const { return structure_; }

 private:
  SelfSimilarStructure structure_;
  std::size_t max_strips_ = 4096;
};

// ----------------------------------------------------------------------- ⊙

// result(ψ(x,y)) = ψ(f(x), g(y)).
PartialInjection odot(const PartialInjection& f, const PartialInjection& g,
                      const Exponential& e = {});

// σ_⊙(ψ(x,y)) = ψ(y,x); τ_⊙(ψ(x, ψ(y,z))) = ψ(ψ(x,y), z).
PartialInjection sigma_odot(const Exponential& e = {});
PartialInjection tau_odot(const Exponential& e = {});

// ------------------------------------------------------------ exponentials

// result(ψ(x,y)) = ψ(f(x), y): f acts on the payload and the copy index is
// untouched. This is the closed form of the join p∘f∘p‡ ∨ q∘p∘f∘p‡∘q‡ ∨ …,
// and the unique map with star(f, bang(f)) = bang(f).
PartialInjection bang(const PartialInjection& f, const Exponential& e = {});

// The first `terms` summands of that join: ⋁_{k<terms} q^k∘p∘f∘p‡∘(q‡)^k.
// Agrees with bang(f) on every n with ν₂(n+1) < terms.
PartialInjection bang_truncated(const PartialInjection& f, std::size_t terms);

// result(ψ(x,y)) = ψ(x, g(y)); equals σ_⊙∘bang(g)∘σ_⊙.
PartialInjection whimper(const PartialInjection& g, const Exponential& e = {});

// r_j = q^j∘p, i.e. r_j(m) = ψ(m, j).
PartialInjection r_gen(std::size_t j);

// ⋁_{n<terms, n∈dom g} r_{g(n)}∘r_n‡, the map ψ(x,n) ↦ ψ(x,g(n)) for n < terms.
PartialInjection whimper_truncated(const PartialInjection& g, std::size_t terms);

// --------------------------------------------------------------- execution

enum class ExecStatus { value, undefined, diverged };

struct ExecResult {
  ExecStatus status = ExecStatus::undefined;
  Nat value = 0;           // meaningful when status == value
  std::vector<Nat> trace;  // token positions u after each application
};

inline constexpr std::size_t default_exec_budget = 1u << 16;

// Token loop over the p/q port split: u := 2n, then u := f(u) until u is even
// (output u/2), f(u) is undefined, or max_steps applications have happened.
ExecResult exec_eval(const PartialInjection& f, const Nat& n, std::size_t max_steps,
                     bool keep_trace = false);

// n ↦ exec_eval(f, n, budget). Evaluating a diverging point throws
// DivergenceError. The inverse runs the same loop on f‡.
PartialInjection exec(const PartialInjection& f, std::size_t budget = default_exec_budget);

}  // namespace goi
