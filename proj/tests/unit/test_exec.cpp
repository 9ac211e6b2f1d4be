#include <doctest.h>

#include "goi/algebra.hpp"
#include "oracle.hpp"

using namespace goi;
namespace o = oracle;

namespace {

// The feedback formula f11 ∨ ⋁_k f12·f22^k·f21 over the even/odd split, built
// from the four component maps of a finite map.
std::map<o::U, o::U> trace_formula(const std::map<o::U, o::U>& f, int max_k) {
  std::map<o::U, o::U> c[2][2];  // c[out][in]
  for (auto [a, b] : f) c[b % 2][a % 2][a / 2] = b / 2;
  std::map<o::U, o::U> result = c[0][0];
  for (auto [n, m] : c[1][0]) {
    o::U cur = m;
    for (int k = 0; k <= max_k; ++k) {
      if (auto it = c[0][1].find(cur); it != c[0][1].end()) {
        result[n] = it->second;
        break;
      }
      auto nx = c[1][1].find(cur);
      if (nx == c[1][1].end()) break;
      cur = nx->second;
    }
  }
  return result;
}

PartialInjection odd_chain() {
  return join(make_finite({{0, 1}}),
              make_lazy(
                  [](const Nat& n) -> MaybeNat {
                    if (n % 2 == 1) return n + 2;
                    return std::nullopt;
                  },
                  [](const Nat& m) -> MaybeNat {
                    if (m % 2 == 1 && m >= 3) return m - 2;
                    return std::nullopt;
                  }));
}

}  // namespace

TEST_CASE("exec of the swap is the identity") {
  auto e = exec(sigma_star());
  for (unsigned n = 0; n < 1024; ++n) CHECK(goi::apply(e, Nat(n)) == o::some(n));
  auto r = exec_eval(sigma_star(), Nat(5), 10, true);
  CHECK(r.status == ExecStatus::value);
  CHECK(r.value == 5);
  REQUIRE(r.trace.size() == 2);
  CHECK(r.trace[0] == 11);
  CHECK(r.trace[1] == 10);
}

TEST_CASE("exec of zero and of succ") {
  CHECK(holds(equal_on(exec(zero_map()), zero_map(), Nat(1024))));
  auto succ = make_lazy([](const Nat& n) -> MaybeNat { return n + 1; },
                        [](const Nat& n) -> MaybeNat { return n == 0 ? MaybeNat{} : MaybeNat{n - 1}; });
  auto e = exec(succ);
  for (unsigned n = 0; n < 1024; ++n) CHECK(goi::apply(e, Nat(n)) == o::some(n + 1));
  CHECK(goi::unapply(e, Nat(1)) == o::some(0));
  CHECK_FALSE(goi::unapply(e, Nat(0)));
}

TEST_CASE("divergent token") {
  auto f = odd_chain();
  auto r = exec_eval(f, Nat(0), 1000);
  CHECK(r.status == ExecStatus::diverged);
  try {
    goi::apply(exec(f, 1000), Nat(0));
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.input() == 0);
    CHECK(e.budget() == 1000);
  }
  CHECK_THROWS_AS(exec_eval(f, Nat(0), 0), ArgumentError);
}

TEST_CASE("exec matches the feedback formula on finite maps") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto m = o::random_map(rng, i % 25, 40);
    auto expected = trace_formula(m, 64);
    auto e = exec(o::to_pinj(m));
    for (o::U n = 0; n < 25; ++n) {
      auto it = expected.find(n);
      CHECK(o::from(goi::apply(e, Nat(n))) == (it == expected.end() ? o::MU{} : o::MU{it->second}));
    }
    // the inverse runs on the inverse map
    for (auto [n, v] : expected) CHECK(goi::unapply(e, Nat(v)) == o::some(n));
  }
}
