#pragma once

// Partial injections of the natural numbers and their inverse-category
// structure.
//
// A PartialInjection is an immutable value in one of three representations:
//
//   FiniteMap   finitely many (input, output) pairs
//   PrefixMap   finitely many affine maps between dyadic residue classes;
//               exact and closed under composition, inverse and join
//   LazyMap     a pair of point procedures (forward, backward)
//
// Composition is functional throughout: compose(f, g) is "f after g".
// Operations stay symbolic when both operands are finite or prefix maps and
// fall back to a LazyMap otherwise. Equality of lazy maps is only
// semi-decidable, so the only equality offered is bounded (equal_on).

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "goi/errors.hpp"
#include "goi/nat.hpp"

namespace goi {

struct FinitePair {
  Nat input;
  Nat output;
  friend bool operator==(const FinitePair&, const FinitePair&) = default;
};

class FiniteMap {
 public:
  FiniteMap() = default;

  // Throws InjectivityError on a repeated input or output.
  static FiniteMap from_pairs(const std::vector<FinitePair>& pairs);

  MaybeNat apply(const Nat& n) const;
  MaybeNat unapply(const Nat& m) const;
  FiniteMap inverse() const;

  std::size_t size() const { return forward_.size(); }
  bool empty() const { return forward_.empty(); }
  // Sorted by input.
  const std::map<Nat, Nat>& forward() const { return forward_; }
  std::vector<FinitePair> pairs() const;

 private:
  std::map<Nat, Nat> forward_;
  std::map<Nat, Nat> backward_;
};

// The residue class { n : n ≡ residue (mod 2^bits) }.
struct DyadicClass {
  std::size_t bits = 0;
  Nat residue = 0;

  bool contains(const Nat& n) const { return in_class(n, bits, residue); }
  bool intersects(const DyadicClass& other) const;
  // True iff this class is a subset of other.
  bool within(const DyadicClass& other) const;
  DyadicClass half(int bit) const;
  friend bool operator==(const DyadicClass&, const DyadicClass&) = default;
};

// Maps 2^in_bits·m + in_residue to 2^out_bits·m + out_residue.
struct PrefixRule {
  std::size_t in_bits = 0;
  Nat in_residue = 0;
  std::size_t out_bits = 0;
  Nat out_residue = 0;

  DyadicClass input_class() const { return {in_bits, in_residue}; }
  DyadicClass output_class() const { return {out_bits, out_residue}; }

  // Preconditions: argument lies in the input (resp. output) class.
  Nat forward(const Nat& n) const;
  Nat backward(const Nat& m) const;

  PrefixRule inverse() const { return {out_bits, out_residue, in_bits, in_residue}; }
  // The same affine map on a subclass of the input class.
  PrefixRule restrict_to(const DyadicClass& sub) const;

  friend bool operator==(const PrefixRule&, const PrefixRule&) = default;
};

class PrefixMap {
 public:
  PrefixMap() = default;

  // Validates residues and pairwise disjointness (OverlapError), then merges
  // sibling rules into their parent class where possible.
  static PrefixMap from_rules(std::vector<PrefixRule> rules);

  // For rule sets already known to be disjoint; still normalises.
  static PrefixMap from_disjoint_rules(std::vector<PrefixRule> rules);

  MaybeNat apply(const Nat& n) const;
  MaybeNat unapply(const Nat& m) const;
  PrefixMap inverse() const;

  const std::vector<PrefixRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  // Index of the rule whose input (resp. output) class contains the point.
  std::optional<std::size_t> rule_for_input(const Nat& n) const;
  std::optional<std::size_t> rule_for_output(const Nat& m) const;

 private:
  // Binary trie over the low bits; each rule sits at depth == its class bits.
  class Trie {
   public:
    // Returns the index of a previously inserted rule whose class meets this
    // one, or nothing on success.
    std::optional<std::size_t> insert(const DyadicClass& cls, std::size_t rule);
    std::optional<std::size_t> find(const Nat& n) const;

   private:
    struct Node {
      std::int32_t child[2] = {-1, -1};
      std::int64_t rule = -1;
    };
    std::vector<Node> nodes_{Node{}};
  };

  void index();

  std::vector<PrefixRule> rules_;
  Trie inputs_;
  Trie outputs_;
};

using PointFn = std::function<MaybeNat(const Nat&)>;

class LazyMap {
 public:
  // forward and backward must be mutually inverse wherever defined; this is
  // the caller's obligation and is only spot-checked by tests. With memoize,
  // results are cached per point behind a mutex.
  LazyMap(PointFn forward, PointFn backward, bool memoize = false);

  MaybeNat apply(const Nat& n) const;
  MaybeNat unapply(const Nat& m) const;
  LazyMap inverse() const;

 private:
  class Memo;

  PointFn forward_;
  PointFn backward_;
  std::shared_ptr<Memo> forward_memo_;
  std::shared_ptr<Memo> backward_memo_;
};

enum class Representation { finite, prefix, lazy };

class PartialInjection {
 public:
  PartialInjection(FiniteMap map);
  PartialInjection(PrefixMap map);
  PartialInjection(LazyMap map);

  // Undefined at negative arguments.
  MaybeNat apply(const Nat& n) const;
  MaybeNat unapply(const Nat& m) const;

  Representation representation() const;
  const FiniteMap* as_finite() const { return std::get_if<FiniteMap>(rep_.get()); }
  const PrefixMap* as_prefix() const { return std::get_if<PrefixMap>(rep_.get()); }
  const LazyMap* as_lazy() const { return std::get_if<LazyMap>(rep_.get()); }
  bool symbolic() const { return representation() != Representation::lazy; }
  // A finite or prefix map with no pairs/rules.
  bool known_empty() const;

  // Finite maps render as "{0->3, 1->5}" (or "zero"), prefix maps list their
  // rules, lazy maps render as "<lazy>".
  std::string describe() const;

 private:
  using Rep = std::variant<FiniteMap, PrefixMap, LazyMap>;
  std::shared_ptr<const Rep> rep_;
};

// Outcome of a bounded or exact check.
struct HoldsExactly {};
struct HoldsUpTo {
  Nat bound;
};
struct Fails {
  Nat witness;
  MaybeNat lhs;
  MaybeNat rhs;
};
using CheckOutcome = std::variant<HoldsExactly, HoldsUpTo, Fails>;

bool holds(const CheckOutcome& outcome);
std::string to_string(const CheckOutcome& outcome);

MaybeNat apply(const PartialInjection& f, const Nat& n);
MaybeNat unapply(const PartialInjection& f, const Nat& m);

PartialInjection identity();
PartialInjection zero_map();

PartialInjection make_finite(const std::vector<FinitePair>& pairs);
PartialInjection make_prefix(std::vector<PrefixRule> rules);
PartialInjection make_lazy(PointFn forward, PointFn backward, bool memoize = false);

// f after g.
PartialInjection compose(const PartialInjection& f, const PartialInjection& g);
PartialInjection gen_inverse(const PartialInjection& f);

// Least upper bound of two compatible maps. Finite and prefix operands are
// checked eagerly; with a lazy operand the CompatibilityError surfaces when a
// conflicting point is evaluated.
PartialInjection join(const PartialInjection& f, const PartialInjection& g);

// f is a restriction of g. Exact for finite/prefix operands (and for a finite
// left operand), otherwise checked on [0, bound).
CheckOutcome leq(const PartialInjection& f, const PartialInjection& g, const Nat& bound);

// Pointwise comparison on [0, bound), definedness included.
CheckOutcome equal_on(const PartialInjection& f, const PartialInjection& g, const Nat& bound);

// Partial identities on the domain and range of f.
PartialInjection domain_id(const PartialInjection& f);
PartialInjection range_id(const PartialInjection& f);

PartialInjection power(const PartialInjection& f, std::size_t k);

}  // namespace goi
