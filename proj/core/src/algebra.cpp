#include "goi/algebra.hpp"

namespace goi {

namespace {

// ψ grows like 2^y; refuse copy indices whose image would not fit in memory.
constexpr std::size_t max_copy_index = std::size_t{1} << 24;

PartialInjection single_rule(std::size_t in_bits, Nat in_residue, std::size_t out_bits,
                             Nat out_residue) {
  return PrefixMap::from_disjoint_rules(
      {PrefixRule{in_bits, std::move(in_residue), out_bits, std::move(out_residue)}});
}

bool finite_or_empty(const PartialInjection& f) { return f.as_finite() || f.known_empty(); }
bool prefix_or_empty(const PartialInjection& f) { return f.as_prefix() || f.known_empty(); }

// Copies the rules of f into one half of the Cantor split.
void tensor_rules(const PartialInjection& f, unsigned tag, std::vector<PrefixRule>& out) {
  if (const auto* p = f.as_prefix()) {
    for (const auto& r : p->rules()) {
      out.push_back({r.in_bits + 1, (r.in_residue << 1) + tag, r.out_bits + 1,
                     (r.out_residue << 1) + tag});
    }
  }
}

void tensor_pairs(const PartialInjection& f, unsigned tag, std::vector<FinitePair>& out) {
  if (const auto* m = f.as_finite()) {
    for (const auto& [in, o] : m->forward()) {
      out.push_back({(in << 1) + tag, (o << 1) + tag});
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- ℕ ⊎ ℕ ≅ ℕ

Nat cantor_code(const SumIndex& s) {
  if (s.tag > 1) {
    throw ArgumentError("sum tag must be 0 or 1");
  }
  return (s.n << 1) + s.tag;
}

SumIndex cantor_decode(const Nat& n) {
  if (n < 0) {
    throw ArgumentError("cantor_decode of a negative number");
  }
  const unsigned tag = boost::multiprecision::bit_test(n, 0) ? 1u : 0u;
  return {n >> 1, tag};
}

PartialInjection gen_p() { return single_rule(0, 0, 1, 0); }
PartialInjection gen_q() { return single_rule(0, 0, 1, 1); }
PartialInjection gen_p_dag() { return single_rule(1, 0, 0, 0); }
PartialInjection gen_q_dag() { return single_rule(1, 1, 0, 0); }

// ------------------------------------------------------ SelfSimilarStructure

SelfSimilarStructure::SelfSimilarStructure(PartialInjection j0, PartialInjection j1, bool cantor)
    : j0_(std::move(j0)), j1_(std::move(j1)), cantor_(cantor) {}

SelfSimilarStructure default_structure() { return {gen_p(), gen_q(), true}; }

SelfSimilarStructure SelfSimilarStructure::make(PartialInjection j0, PartialInjection j1,
                                                const Nat& bound) {
  const auto id = identity();
  auto require = [&](const CheckOutcome& outcome, const std::string& what) {
    if (!holds(outcome)) {
      throw ArgumentError("not a self-similar structure: " + what + " (" + to_string(outcome) +
                          ")");
    }
  };
  require(equal_on(domain_id(j0), id, bound), "first injection is not total");
  require(equal_on(domain_id(j1), id, bound), "second injection is not total");
  const auto r0 = range_id(j0);
  const auto r1 = range_id(j1);
  require(equal_on(compose(r0, r1), zero_map(), bound), "ranges intersect");
  require(equal_on(join(r0, r1), id, bound), "ranges do not cover ℕ");

  bool cantor = false;
  const auto* p0 = j0.as_prefix();
  const auto* p1 = j1.as_prefix();
  if (p0 && p1) {
    cantor = p0->rules() == gen_p().as_prefix()->rules() &&
             p1->rules() == gen_q().as_prefix()->rules();
  }
  return {std::move(j0), std::move(j1), cantor};
}

std::optional<SelfSimilarStructure::Stripped> SelfSimilarStructure::strip(
    const Nat& n, std::size_t max_strips) const {
  Nat cur = n;
  for (std::size_t copies = 0; copies <= max_strips; ++copies) {
    auto prev = j1_.unapply(cur);
    if (!prev) {
      return Stripped{copies, std::move(cur)};
    }
    if (*prev == cur) {
      return std::nullopt;
    }
    cur = std::move(*prev);
  }
  return std::nullopt;
}

CheckOutcome SelfSimilarStructure::check_no_residue(const Nat& bound,
                                                    std::size_t max_strips) const {
  for (Nat n = 0; n < bound; ++n) {
    if (!strip(n, max_strips)) {
      return Fails{n, std::nullopt, std::nullopt};
    }
  }
  return HoldsUpTo{bound};
}

// ----------------------------------------------------------------------- ⋆

PartialInjection star(const PartialInjection& f, const PartialInjection& g) {
  if (finite_or_empty(f) && finite_or_empty(g)) {
    std::vector<FinitePair> pairs;
    tensor_pairs(f, 0, pairs);
    tensor_pairs(g, 1, pairs);
    return make_finite(pairs);
  }
  if (prefix_or_empty(f) && prefix_or_empty(g)) {
    std::vector<PrefixRule> rules;
    tensor_rules(f, 0, rules);
    tensor_rules(g, 1, rules);
    return PrefixMap::from_disjoint_rules(std::move(rules));
  }
  return make_lazy(
      [f, g](const Nat& n) -> MaybeNat {
        const auto [m, tag] = cantor_decode(n);
        auto image = tag == 0 ? f.apply(m) : g.apply(m);
        if (!image) {
          return std::nullopt;
        }
        return cantor_code({*image, tag});
      },
      [f, g](const Nat& n) -> MaybeNat {
        const auto [m, tag] = cantor_decode(n);
        auto image = tag == 0 ? f.unapply(m) : g.unapply(m);
        if (!image) {
          return std::nullopt;
        }
        return cantor_code({*image, tag});
      });
}

PartialInjection star(const PartialInjection& f, const PartialInjection& g,
                      const SelfSimilarStructure& s) {
  if (s.is_cantor()) {
    return star(f, g);
  }
  return join(compose(s.j0(), compose(f, gen_inverse(s.j0()))),
              compose(s.j1(), compose(g, gen_inverse(s.j1()))));
}

PartialInjection star_via_join(const PartialInjection& f, const PartialInjection& g) {
  return join(compose(gen_p(), compose(f, gen_p_dag())), compose(gen_q(), compose(g, gen_q_dag())));
}

PartialInjection tau_star() {
  return make_prefix({{1, 0, 2, 0}, {2, 1, 2, 2}, {2, 3, 1, 1}});
}

PartialInjection sigma_star() { return make_prefix({{1, 0, 1, 1}, {1, 1, 1, 0}}); }

// ------------------------------------------------------------- ℕ × ℕ ≅ ℕ

Nat psi(const ProdIndex& i) {
  if (i.x < 0 || i.y < 0) {
    throw ArgumentError("psi of a negative coordinate");
  }
  const std::size_t y = to_size(i.y, max_copy_index);
  return (i.x << (y + 1)) + pow2(y) - 1;
}

ProdIndex psi_inv(const Nat& n) {
  if (n < 0) {
    throw ArgumentError("psi_inv of a negative number");
  }
  const Nat up = n + 1;
  const std::size_t y = nu2(up);
  return {((up >> y) - 1) >> 1, Nat(y)};
}

Exponential::Exponential() : structure_(default_structure()) {}

Exponential::Exponential(SelfSimilarStructure s, const Nat& bound, std::size_t max_strips)
    : structure_(std::move(s)), max_strips_(max_strips) {
  const auto outcome = structure_.check_no_residue(bound, max_strips);
  if (const auto* f = std::get_if<Fails>(&outcome)) {
    throw NoResidueError(f->witness);
  }
}

Nat Exponential::psi(const ProdIndex& i) const {
  if (structure_.is_cantor()) {
    return goi::psi(i);
  }
  const std::size_t y = to_size(i.y, max_copy_index);
  auto cur = structure_.j0().apply(i.x);
  for (std::size_t k = 0; k < y && cur; ++k) {
    cur = structure_.j1().apply(*cur);
  }
  if (!cur) {
    throw ArgumentError("structure injection undefined while computing psi");
  }
  return *cur;
}

ProdIndex Exponential::psi_inv(const Nat& n) const {
  if (structure_.is_cantor()) {
    return goi::psi_inv(n);
  }
  auto stripped = structure_.strip(n, max_strips_);
  if (!stripped) {
    throw NoResidueError(n);
  }
  auto x = structure_.j0().unapply(stripped->rest);
  if (!x) {
    throw ArgumentError("stripped point lies outside both ranges");
  }
  return {std::move(*x), Nat(stripped->copies)};
}

// ----------------------------------------------------------------------- ⊙

PartialInjection odot(const PartialInjection& f, const PartialInjection& g, const Exponential& e) {
  return make_lazy(
      [f, g, e](const Nat& n) -> MaybeNat {
        const auto [x, y] = e.psi_inv(n);
        auto a = f.apply(x);
        if (!a) {
          return std::nullopt;
        }
        auto b = g.apply(y);
        if (!b) {
          return std::nullopt;
        }
        return e.psi({std::move(*a), std::move(*b)});
      },
      [f, g, e](const Nat& m) -> MaybeNat {
        const auto [x, y] = e.psi_inv(m);
        auto a = f.unapply(x);
        if (!a) {
          return std::nullopt;
        }
        auto b = g.unapply(y);
        if (!b) {
          return std::nullopt;
        }
        return e.psi({std::move(*a), std::move(*b)});
      });
}

PartialInjection sigma_odot(const Exponential& e) {
  auto swap = [e](const Nat& n) -> MaybeNat {
    const auto [x, y] = e.psi_inv(n);
    return e.psi({y, x});
  };
  return make_lazy(swap, swap);
}

PartialInjection tau_odot(const Exponential& e) {
  return make_lazy(
      [e](const Nat& n) -> MaybeNat {
        const auto [x, rest] = e.psi_inv(n);
        const auto [y, z] = e.psi_inv(rest);
        return e.psi({e.psi({x, y}), z});
      },
      [e](const Nat& n) -> MaybeNat {
        const auto [head, z] = e.psi_inv(n);
        const auto [x, y] = e.psi_inv(head);
        return e.psi({x, e.psi({y, z})});
      });
}

// ------------------------------------------------------------ exponentials

PartialInjection bang(const PartialInjection& f, const Exponential& e) {
  return make_lazy(
      [f, e](const Nat& n) -> MaybeNat {
        auto [x, y] = e.psi_inv(n);
        auto a = f.apply(x);
        if (!a) {
          return std::nullopt;
        }
        return e.psi({std::move(*a), std::move(y)});
      },
      [f, e](const Nat& m) -> MaybeNat {
        auto [x, y] = e.psi_inv(m);
        auto a = f.unapply(x);
        if (!a) {
          return std::nullopt;
        }
        return e.psi({std::move(*a), std::move(y)});
      });
}

PartialInjection bang_truncated(const PartialInjection& f, std::size_t terms) {
  if (terms < 1) {
    throw ArgumentError("bang_truncated needs at least one term");
  }
  PartialInjection result = zero_map();
  for (std::size_t k = 0; k < terms; ++k) {
    const auto r = r_gen(k);
    result = join(result, compose(r, compose(f, gen_inverse(r))));
  }
  return result;
}

PartialInjection whimper(const PartialInjection& g, const Exponential& e) {
  return make_lazy(
      [g, e](const Nat& n) -> MaybeNat {
        auto [x, y] = e.psi_inv(n);
        auto b = g.apply(y);
        if (!b) {
          return std::nullopt;
        }
        return e.psi({std::move(x), std::move(*b)});
      },
      [g, e](const Nat& m) -> MaybeNat {
        auto [x, y] = e.psi_inv(m);
        auto b = g.unapply(y);
        if (!b) {
          return std::nullopt;
        }
        return e.psi({std::move(x), std::move(*b)});
      });
}

PartialInjection r_gen(std::size_t j) {
  if (j > max_copy_index) {
    throw ArgumentError("r_gen index " + std::to_string(j) + " is too large");
  }
  return single_rule(0, 0, j + 1, pow2(j) - 1);
}

PartialInjection whimper_truncated(const PartialInjection& g, std::size_t terms) {
  if (terms < 1) {
    throw ArgumentError("whimper_truncated needs at least one term");
  }
  PartialInjection result = zero_map();
  for (std::size_t n = 0; n < terms; ++n) {
    auto image = g.apply(n);
    if (!image) {
      continue;
    }
    const std::size_t target = to_size(*image, max_copy_index);
    result = join(result, compose(r_gen(target), gen_inverse(r_gen(n))));
  }
  return result;
}

// --------------------------------------------------------------- execution

ExecResult exec_eval(const PartialInjection& f, const Nat& n, std::size_t max_steps,
                     bool keep_trace) {
  if (max_steps < 1) {
    throw ArgumentError("exec needs a step budget of at least 1");
  }
  ExecResult result;
  Nat u = n << 1;
  for (std::size_t step = 0; step < max_steps; ++step) {
    auto next = f.apply(u);
    if (!next) {
      result.status = ExecStatus::undefined;
      return result;
    }
    u = std::move(*next);
    if (keep_trace) {
      result.trace.push_back(u);
    }
    if (!boost::multiprecision::bit_test(u, 0)) {
      result.status = ExecStatus::value;
      result.value = u >> 1;
      return result;
    }
  }
  result.status = ExecStatus::diverged;
  return result;
}

PartialInjection exec(const PartialInjection& f, std::size_t budget) {
  auto run = [budget](const PartialInjection& h, const Nat& n) -> MaybeNat {
    auto r = exec_eval(h, n, budget);
    switch (r.status) {
      case ExecStatus::value:
        return std::move(r.value);
      case ExecStatus::undefined:
        return std::nullopt;
      case ExecStatus::diverged:
        break;
    }
    throw DivergenceError(n, budget);
  };
  const auto inverse = gen_inverse(f);
  return make_lazy([f, run](const Nat& n) { return run(f, n); },
                   [inverse, run](const Nat& m) { return run(inverse, m); },
                   /*memoize=*/true);
}

}  // namespace goi
