#include <doctest.h>

#include <set>

#include "goi/algebra.hpp"
#include "oracle.hpp"

using namespace goi;
namespace o = oracle;

namespace {

struct Cls {
  std::size_t bits;
  o::U residue;
};

// Random partition of N into dyadic classes by repeated splitting.
std::vector<Cls> partition(std::mt19937_64& rng, std::size_t leaves, std::size_t max_bits) {
  std::vector<Cls> v{{0, 0}};
  while (v.size() < leaves) {
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    auto i = pick(rng);
    if (v[i].bits >= max_bits) continue;
    Cls c = v[i];
    v[i] = {c.bits + 1, c.residue};
    v.push_back({c.bits + 1, c.residue | (o::U{1} << c.bits)});
  }
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

struct RandomPrefix {
  std::vector<PrefixRule> rules;
  PartialInjection map = zero_map();
  o::Fn oracle;
};

o::MU eval_rules(const std::vector<PrefixRule>& rules, o::U n) {
  for (const auto& r : rules) {
    o::U mask = (o::U{1} << r.in_bits) - 1;
    if ((n & mask) == static_cast<o::U>(r.in_residue))
      return ((n >> r.in_bits) << r.out_bits) + static_cast<o::U>(r.out_residue);
  }
  return std::nullopt;
}

RandomPrefix random_prefix(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> count(1, 6);
  std::size_t k = count(rng);
  auto ins = partition(rng, k, 4), outs = partition(rng, k, 4);
  std::bernoulli_distribution keep(0.75);
  RandomPrefix rp;
  for (std::size_t i = 0; i < k; ++i)
    if (keep(rng))
      rp.rules.push_back({ins[i].bits, Nat(ins[i].residue), outs[i].bits, Nat(outs[i].residue)});
  rp.map = make_prefix(rp.rules);
  auto rules = rp.rules;
  rp.oracle = [rules](o::U n) { return eval_rules(rules, n); };
  return rp;
}

PartialInjection random_any(std::mt19937_64& rng, int i) {
  if (i % 2 == 0) return random_prefix(rng).map;
  return o::to_pinj(o::random_map(rng, i % 17, 48));
}

bool agree(const PartialInjection& a, const PartialInjection& b, std::uint64_t bound) {
  return holds(equal_on(a, b, Nat(bound)));
}

}  // namespace

TEST_CASE("random prefix maps match direct rule evaluation") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto r = random_prefix(rng);
    CHECK(o::first_difference(r.map, r.oracle, 4096) == std::nullopt);
    // injective, and unapply inverts apply
    for (o::U n = 0; n < 1024; ++n) {
      auto v = goi::apply(r.map, Nat(n));
      if (v) CHECK(goi::unapply(r.map, *v) == o::some(n));
    }
  }
}

TEST_CASE("symbolic composition of prefix maps is pointwise composition") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 150; ++i) {
    auto a = random_prefix(rng), b = random_prefix(rng);
    auto c = compose(a.map, b.map);
    CHECK(c.symbolic());
    CHECK(o::first_difference(c, o::after(a.oracle, b.oracle), 1u << 16) == std::nullopt);
  }
}

TEST_CASE("inverse-category axioms") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto f = random_any(rng, i), g = random_any(rng, i + 1);
    auto fd = gen_inverse(f);
    CHECK(agree(compose(f, compose(fd, f)), f, 4096));
    CHECK(agree(compose(fd, compose(f, fd)), fd, 4096));
    CHECK(agree(gen_inverse(fd), f, 4096));
    CHECK(agree(gen_inverse(compose(g, f)), compose(fd, gen_inverse(g)), 4096));
    // idempotents commute
    auto e1 = domain_id(f), e2 = range_id(g);
    CHECK(agree(compose(e1, e2), compose(e2, e1), 4096));
  }
}

TEST_CASE("join of a split map gives the map back") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    auto r = random_prefix(rng);
    std::vector<PrefixRule> left, right;
    for (std::size_t k = 0; k < r.rules.size(); ++k) (k % 2 ? left : right).push_back(r.rules[k]);
    auto j = join(make_prefix(left), make_prefix(right));
    CHECK(o::first_difference(j, r.oracle, 4096) == std::nullopt);
    CHECK(agree(join(r.map, r.map), r.map, 1024));
    CHECK(agree(join(r.map, zero_map()), r.map, 1024));
    // f ∨ g is an upper bound of both
    CHECK(holds(leq(make_prefix(left), j, Nat(1024))));
    CHECK(holds(leq(make_prefix(right), j, Nat(1024))));
  }
}

TEST_CASE("join of finite maps is union or a compatibility error") {
  std::mt19937_64 rng(5);
  int joined = 0, refused = 0;
  for (int i = 0; i < 500; ++i) {
    auto a = o::random_map(rng, i % 6, 12), b = o::random_map(rng, (i / 3) % 6, 12);
    bool ok = true;
    std::map<o::U, o::U> u = a;
    std::set<o::U> outs;
    for (auto [k, v] : a) outs.insert(v);
    for (auto [k, v] : b) {
      auto it = u.find(k);
      if (it != u.end()) {
        if (it->second != v) ok = false;
      } else {
        if (outs.count(v)) ok = false;
        u[k] = v;
        outs.insert(v);
      }
    }
    if (ok) {
      ++joined;
      CHECK(o::first_difference(join(o::to_pinj(a), o::to_pinj(b)), o::finite(u), 16) == std::nullopt);
    } else {
      ++refused;
      CHECK_THROWS_AS(join(o::to_pinj(a), o::to_pinj(b)), CompatibilityError);
    }
  }
  CHECK(joined > 50);
  CHECK(refused > 50);
}

TEST_CASE("restriction order agrees with the idempotent form") {
  // f ≤ g iff f = g∘e for some idempotent e; e = dom(f) is the only candidate
  std::mt19937_64 rng(6);
  int below = 0;
  for (int i = 0; i < 500; ++i) {
    auto g = o::random_map(rng, 8, 12);
    std::map<o::U, o::U> f;
    if (i % 2 == 0) {
      for (auto [k, v] : g)
        if (rng() % 2) f[k] = v;
    } else {
      f = o::random_map(rng, i % 5, 12);
    }
    auto F = o::to_pinj(f), G = o::to_pinj(g);
    bool relational = true;
    for (auto [k, v] : f) relational = relational && g.count(k) && g.at(k) == v;
    bool idempotent = holds(equal_on(F, compose(G, domain_id(F)), Nat(16)));
    auto verdict = leq(F, G, Nat(16));
    CHECK(relational == idempotent);
    CHECK(holds(verdict) == relational);
    CHECK_FALSE(std::holds_alternative<HoldsUpTo>(verdict));
    below += relational;
  }
  CHECK(below > 100);
}

TEST_CASE("leq on prefix maps is exact") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto r = random_prefix(rng);
    if (r.rules.empty()) continue;
    // restrict one rule to a subclass
    auto rules = r.rules;
    rules[0] = rules[0].restrict_to(rules[0].input_class().half(static_cast<int>(rng() % 2)));
    auto smaller = make_prefix(rules);
    CHECK(std::holds_alternative<HoldsExactly>(leq(smaller, r.map, Nat(64))));
    auto back = leq(r.map, smaller, Nat(64));
    REQUIRE(std::holds_alternative<Fails>(back));
    auto w = std::get<Fails>(back).witness;
    CHECK(goi::apply(r.map, w) != goi::apply(smaller, w));
  }
}

TEST_CASE("star bifunctoriality on random maps") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 60; ++i) {
    auto f = random_any(rng, i), g = random_any(rng, i + 1), h = random_any(rng, i + 2),
         k = random_any(rng, i + 3);
    CHECK(agree(compose(star(f, g), star(h, k)), star(compose(f, h), compose(g, k)), 4096));
    CHECK(agree(star(f, g), star_via_join(f, g), 4096));
    CHECK(agree(gen_inverse(star(f, g)), star(gen_inverse(f), gen_inverse(g)), 4096));
  }
}
