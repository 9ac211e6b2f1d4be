#include "goi/lawcheck.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "goi/algebra.hpp"

namespace goi::lawcheck {

namespace {

using Vars = std::span<const PartialInjection>;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, n), n >= 1.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) {
      return v % n;
    }
  }
}

// k distinct values from [0, n) in uniformly random order.
std::vector<std::uint64_t> distinct(std::mt19937_64& rng, std::size_t k, std::uint64_t n) {
  std::vector<std::uint64_t> out;
  out.reserve(k);
  if (n <= 4 * static_cast<std::uint64_t>(k) + 64) {
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      pool[i] = i;
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below(rng, n - i)]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < k) {
    const auto v = below(rng, n);
    if (seen.insert(v).second) {
      out.push_back(v);
    }
  }
  return out;
}

std::size_t terms_for(std::uint64_t bound) {
  // ⌊log₂ bound⌋ + 1 summands cover every copy index below the bound.
  return static_cast<std::size_t>(bit_length(Nat(bound)));
}

// Bit interleaving ℕ ≅ ℕ × ℕ, independent of ψ: even bits to x, odd to y.
ProdIndex deinterleave(const Nat& n) {
  Nat x = 0;
  Nat y = 0;
  const std::size_t bits = bit_length(n);
  for (std::size_t i = 0; i < bits; ++i) {
    if (boost::multiprecision::bit_test(n, static_cast<unsigned>(i))) {
      auto& dst = (i % 2 == 0) ? x : y;
      boost::multiprecision::bit_set(dst, static_cast<unsigned>(i / 2));
    }
  }
  return {x, y};
}

Nat interleave(const ProdIndex& i) {
  Nat n = 0;
  const std::size_t bits = std::max(bit_length(i.x), bit_length(i.y));
  for (std::size_t k = 0; k < bits; ++k) {
    if (boost::multiprecision::bit_test(i.x, static_cast<unsigned>(k))) {
      boost::multiprecision::bit_set(n, static_cast<unsigned>(2 * k));
    }
    if (boost::multiprecision::bit_test(i.y, static_cast<unsigned>(k))) {
      boost::multiprecision::bit_set(n, static_cast<unsigned>(2 * k + 1));
    }
  }
  return n;
}

PartialInjection pointwise(std::function<MaybeNat(const Nat&)> fn) {
  // Only the forward direction is compared by the runner.
  return make_lazy(fn, fn);
}

std::vector<LawSpec> build_registry() {
  std::vector<LawSpec> laws;
  auto add = [&](std::string name, std::string statement, std::size_t arity,
                 std::uint64_t bound, decltype(LawSpec::builder) builder) {
    laws.push_back({std::move(name), std::move(statement), arity, bound, std::move(builder)});
  };

  add("inverse-axioms", "f.f~.f = f and f~.f.f~ = f~", 1, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        const auto& f = v[0];
        const auto inv = gen_inverse(f);
        return {{"f.f~.f = f", compose(f, compose(inv, f)), f},
                {"f~.f.f~ = f~", compose(inv, compose(f, inv)), inv}};
      });

  add("dagger-contravariance", "(f.g)~ = g~.f~", 2, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        return {{"(f.g)~ = g~.f~", gen_inverse(compose(v[0], v[1])),
                 compose(gen_inverse(v[1]), gen_inverse(v[0]))}};
      });

  add("dyn-alg", "p~.p = q~.q = id, q~.p = p~.q = zero", 0, 100000,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        const auto p = gen_p();
        const auto q = gen_q();
        return {{"p~.p = id", compose(gen_p_dag(), p), identity()},
                {"q~.q = id", compose(gen_q_dag(), q), identity()},
                {"q~.p = zero", compose(gen_q_dag(), p), zero_map()},
                {"p~.q = zero", compose(gen_p_dag(), q), zero_map()}};
      });

  add("dyn-complete", "p.p~ + q.q~ = id", 0, 100000,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        return {{"p.p~ + q.q~ = id",
                 join(compose(gen_p(), gen_p_dag()), compose(gen_q(), gen_q_dag())), identity()}};
      });

  add("star-join", "f * g = p.f.p~ + q.g.q~", 2, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        return {{"f * g = p.f.p~ + q.g.q~", star(v[0], v[1]), star_via_join(v[0], v[1])}};
      });

  add("pentagon-star", "(tau * id).tau.(id * tau) = tau.tau", 0, 65536,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        const auto t = tau_star();
        const auto id = identity();
        return {{"pentagon", compose(star(t, id), compose(t, star(id, t))), compose(t, t)}};
      });

  add("hexagon-star", "tau.sigma.tau = (sigma * id).tau.(id * sigma)", 0, 65536,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        const auto t = tau_star();
        const auto s = sigma_star();
        const auto id = identity();
        return {{"hexagon", compose(t, compose(s, t)),
                 compose(star(s, id), compose(t, star(id, s)))}};
      });

  add("pentagon-odot", "(tau2 & id).tau2.(id & tau2) = tau2.tau2", 0, 4096,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        const auto t = tau_odot();
        const auto id = identity();
        return {{"pentagon", compose(odot(t, id), compose(t, odot(id, t))), compose(t, t)}};
      });

  add("hexagon-odot", "tau2.sigma2.tau2 = (sigma2 & id).tau2.(id & sigma2)", 0, 4096,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        const auto t = tau_odot();
        const auto s = sigma_odot();
        const auto id = identity();
        return {{"hexagon", compose(t, compose(s, t)),
                 compose(odot(s, id), compose(t, odot(id, s)))}};
      });

  add("naturality-tau", "tau.(f * (g * h)) = ((f * g) * h).tau", 3, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        const auto t = tau_star();
        return {{"tau natural", compose(t, star(v[0], star(v[1], v[2]))),
                 compose(star(star(v[0], v[1]), v[2]), t)}};
      });

  add("naturality-sigma", "sigma.(f * g) = (g * f).sigma", 2, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        const auto s = sigma_star();
        return {{"sigma natural", compose(s, star(v[0], v[1])), compose(star(v[1], v[0]), s)}};
      });

  add("star-functorial", "id * id = id, (f.h) * (g.k) = (f * g).(h * k)", 4, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        return {{"id * id = id", star(identity(), identity()), identity()},
                {"(f.h) * (g.k) = (f * g).(h * k)", star(compose(v[0], v[2]), compose(v[1], v[3])),
                 compose(star(v[0], v[1]), star(v[2], v[3]))}};
      });

  add("odot-functorial", "id & id = id, (f.h) & (g.k) = (f & g).(h & k)", 4, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        return {{"id & id = id", odot(identity(), identity()), identity()},
                {"(f.h) & (g.k) = (f & g).(h & k)", odot(compose(v[0], v[2]), compose(v[1], v[3])),
                 compose(odot(v[0], v[1]), odot(v[2], v[3]))}};
      });

  add("bang-hom", "!id = id, !(g.f) = !g.!f", 2, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        return {{"!id = id", bang(identity()), identity()},
                {"!(g.f) = !g.!f", bang(compose(v[1], v[0])), compose(bang(v[1]), bang(v[0]))}};
      });

  add("bang-join", "!f = join of q^k.p.f.p~.q~^k over k <= log2(bound)", 1, 4096,
      [](Vars v, std::uint64_t bound) -> std::vector<Equation> {
        return {{"!f = truncated join", bang(v[0]), bang_truncated(v[0], terms_for(bound))}};
      });

  add("fixed-point", "f * !f = !f", 1, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        const auto b = bang(v[0]);
        return {{"f * !f = !f", star(v[0], b), b}};
      });

  add("whimper-conj", "?g = sigma2.!g.sigma2", 1, 4096,
      [](Vars v, std::uint64_t) -> std::vector<Equation> {
        const auto s = sigma_odot();
        return {{"?g = sigma2.!g.sigma2", whimper(v[0]), compose(s, compose(bang(v[0]), s))}};
      });

  add("whimper-join", "?g = join of r(g(n)).r(n)~ over n <= log2(bound)", 1, 4096,
      [](Vars v, std::uint64_t bound) -> std::vector<Equation> {
        return {{"?g = truncated join", whimper(v[0]), whimper_truncated(v[0], terms_for(bound))}};
      });

  add("r-relations", "r(k)~.r(j) = id iff j = k else zero; joins of r(n).r(n)~ grow to id", 0,
      1024, [](Vars, std::uint64_t bound) -> std::vector<Equation> {
        std::vector<Equation> eqs;
        constexpr std::size_t family = 16;
        for (std::size_t j = 0; j < family; ++j) {
          for (std::size_t k = 0; k < family; ++k) {
            eqs.push_back({"r(" + std::to_string(k) + ")~.r(" + std::to_string(j) + ")",
                           compose(gen_inverse(r_gen(k)), r_gen(j)),
                           j == k ? identity() : zero_map()});
          }
        }
        // J_K = ⋁_{n<K} r_n∘r_n‡; J_K ⊴ J_{K+1} written as J_K = J_{K+1}∘dom(J_K).
        std::vector<PartialInjection> partial{zero_map()};
        const std::size_t top = std::max<std::size_t>(family, terms_for(bound));
        for (std::size_t n = 0; n <= top; ++n) {
          partial.push_back(join(partial.back(), range_id(r_gen(n))));
        }
        for (std::size_t k = 1; k < top; ++k) {
          eqs.push_back({"J(" + std::to_string(k) + ") <= J(" + std::to_string(k + 1) + ")",
                         partial[k], compose(partial[k + 1], domain_id(partial[k]))});
        }
        eqs.push_back({"J(K) = id below 2^K - 1", partial[terms_for(bound)], identity()});
        return eqs;
      });

  add("psi-bijection", "psi.psi_inv = id and psi_inv.psi = id", 0, 65536,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        return {{"psi(psi_inv(n)) = n", pointwise([](const Nat& n) { return psi(psi_inv(n)); }),
                 identity()},
                {"psi_inv(psi(x,y)) = (x,y)",
                 pointwise([](const Nat& n) { return interleave(psi_inv(psi(deinterleave(n)))); }),
                 identity()}};
      });

  add("no-residue", "stripping by q always terminates", 0, 65536,
      [](Vars, std::uint64_t) -> std::vector<Equation> {
        const auto s = default_structure();
        return {{"q^copies(rest) = n", pointwise([s](const Nat& n) -> MaybeNat {
                   auto stripped = s.strip(n, 4096);
                   if (!stripped) {
                     return std::nullopt;
                   }
                   MaybeNat cur = stripped->rest;
                   for (std::size_t i = 0; i < stripped->copies && cur; ++i) {
                     cur = s.j1().apply(*cur);
                   }
                   return cur;
                 }),
                 identity()}};
      });

  return laws;
}

struct InstanceResult {
  std::optional<Witness> witness;
};

InstanceResult check_instance(const LawSpec& law, const std::vector<NamedMap>& vars,
                              std::uint64_t bound) {
  std::vector<PartialInjection> maps;
  std::vector<std::string> names;
  for (const auto& v : vars) {
    maps.push_back(v.map);
    names.push_back(v.name);
  }
  std::vector<Equation> eqs;
  try {
    eqs = law.builder(maps, bound);
  } catch (const std::exception& e) {
    return {Witness{names, "<construction>", Nat(0), std::nullopt, std::nullopt, e.what()}};
  }
  for (const auto& eq : eqs) {
    Nat n = 0;
    try {
      for (; n < bound; ++n) {
        auto a = eq.lhs.apply(n);
        auto b = eq.rhs.apply(n);
        if (a != b) {
          return {Witness{names, eq.label, n, std::move(a), std::move(b), {}}};
        }
      }
    } catch (const std::exception& e) {
      return {Witness{names, eq.label, n, std::nullopt, std::nullopt, e.what()}};
    }
  }
  return {};
}

nlohmann::json nat_json(const MaybeNat& n) {
  if (!n) {
    return nullptr;
  }
  if (*n <= std::numeric_limits<std::uint64_t>::max()) {
    return static_cast<std::uint64_t>(*n);
  }
  return n->str();
}

nlohmann::json report_json(const LawReport& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back({{"inputs", w.inputs},
                         {"point", nat_json(w.point)},
                         {"lhs", nat_json(w.lhs)},
                         {"rhs", nat_json(w.rhs)}});
  }
  std::string verdict = "fails";
  if (std::holds_alternative<HoldsExactly>(r.outcome)) {
    verdict = "holds_exactly";
  } else if (std::holds_alternative<HoldsUpTo>(r.outcome)) {
    verdict = "holds_up_to";
  }
  return {{"law", r.law},
          {"bound", r.bound},
          {"samples", r.samples},
          {"seed", r.seed},
          {"verdict", verdict},
          {"witnesses", witnesses},
          {"elapsed_ms", r.elapsed.count()}};
}

}  // namespace

const std::vector<LawSpec>& registry() {
  static const std::vector<LawSpec> laws = build_registry();
  return laws;
}

const LawSpec& find_law(const std::string& name) {
  for (const auto& law : registry()) {
    if (law.name == name) {
      return law;
    }
  }
  throw UnknownLawError(name);
}

std::vector<NamedMap> generator_suite() {
  return {{"p", gen_p()},          {"q", gen_q()},   {"tau", tau_star()},
          {"sigma", sigma_star()}, {"id", identity()}, {"zero", zero_map()}};
}

PartialInjection random_finite(std::uint64_t seed, std::size_t size, std::uint64_t value_bound) {
  if (size > value_bound) {
    throw ArgumentError("random_finite: size exceeds value_bound");
  }
  std::mt19937_64 rng(splitmix(seed));
  const auto inputs = distinct(rng, size, value_bound);
  const auto outputs = distinct(rng, size, value_bound);
  std::vector<FinitePair> pairs;
  pairs.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    pairs.push_back({Nat(inputs[i]), Nat(outputs[i])});
  }
  return make_finite(pairs);
}

std::vector<std::vector<NamedMap>> instantiations(std::size_t arity, std::size_t samples,
                                                  std::uint64_t seed) {
  const auto gens = generator_suite();
  const std::size_t g = gens.size();
  std::vector<std::vector<NamedMap>> out;
  if (arity == 0) {
    out.push_back({});
    return out;
  }
  if (arity <= 3) {
    // Every generator tuple.
    std::size_t total = 1;
    for (std::size_t i = 0; i < arity; ++i) {
      total *= g;
    }
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<NamedMap> tuple;
      std::size_t c = code;
      for (std::size_t i = 0; i < arity; ++i) {
        tuple.push_back(gens[c % g]);
        c /= g;
      }
      out.push_back(std::move(tuple));
    }
  } else {
    // Cyclic shifts and constant tuples.
    for (std::size_t shift = 0; shift < g; ++shift) {
      std::vector<NamedMap> cyclic;
      std::vector<NamedMap> constant;
      for (std::size_t i = 0; i < arity; ++i) {
        cyclic.push_back(gens[(shift + i) % g]);
        constant.push_back(gens[shift]);
      }
      out.push_back(std::move(cyclic));
      out.push_back(std::move(constant));
    }
  }
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<NamedMap> tuple;
    for (std::size_t v = 0; v < arity; ++v) {
      std::mt19937_64 rng(splitmix(seed ^ splitmix(s * 64 + v + 1)));
      const auto size = static_cast<std::size_t>(below(rng, 17));
      const auto value_bound = std::max<std::uint64_t>(size, 1) + below(rng, 64);
      auto map = random_finite(rng(), size, value_bound);
      tuple.push_back({map.describe(), map});
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

LawReport run_law(const LawSpec& law, std::uint64_t bound, std::size_t samples,
                  std::uint64_t seed) {
  if (bound == 0) {
    bound = law.default_bound;
  }
  if (bound < 2) {
    throw ArgumentError("run_law needs bound >= 2");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto tuples = instantiations(law.arity, samples, seed);
  std::vector<InstanceResult> results(tuples.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tuples.size(); i = next++) {
      results[i] = check_instance(law, tuples[i], bound);
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, tuples.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    worker();
  }

  LawReport report;
  report.law = law.name;
  report.bound = bound;
  report.samples = law.arity == 0 ? 0 : samples;
  report.seed = seed;
  for (auto& r : results) {
    if (r.witness && report.witnesses.size() < max_witnesses) {
      report.witnesses.push_back(std::move(*r.witness));
    }
  }
  if (report.witnesses.empty()) {
    report.outcome = HoldsUpTo{Nat(bound)};
  } else {
    const auto& w = report.witnesses.front();
    report.outcome = Fails{w.point, w.lhs, w.rhs};
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

LawReport run_law(const std::string& name, std::uint64_t bound, std::size_t samples,
                  std::uint64_t seed) {
  return run_law(find_law(name), bound, samples, seed);
}

std::string to_json(const LawReport& report, int indent) { return report_json(report).dump(indent); }

std::string to_json(const std::vector<LawReport>& reports, int indent) {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : reports) {
    all.push_back(report_json(r));
  }
  return all.dump(indent);
}

std::string to_tsv(const LawReport& report) {
  return report.law + "\t" + to_string(report.outcome) + "\t" + std::to_string(report.bound) +
         "\t" + std::to_string(report.samples) + "\t" + std::to_string(report.seed) + "\t" +
         std::to_string(report.elapsed.count());
}

}  // namespace goi::lawcheck
