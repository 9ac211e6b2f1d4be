#include "goi/pinj.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace goi {

namespace mp = boost::multiprecision;

namespace {

bool bit_at(const Nat& n, std::size_t d) {
  constexpr std::size_t limb_bits = sizeof(mp::limb_type) * 8;
  if (d < limb_bits) {
    return (n.backend().limbs()[0] >> d) & 1u;
  }
  return mp::bit_test(n, static_cast<unsigned>(d));
}

std::string rule_text(const PrefixRule& r) {
  return "(" + std::to_string(r.in_bits) + "," + to_string(r.in_residue) + ")->(" +
         std::to_string(r.out_bits) + "," + to_string(r.out_residue) + ")";
}

// Merge sibling rules 2^(k+1)m + r ↦ 2^(k'+1)m + s and
// 2^(k+1)m + r + 2^k ↦ 2^(k'+1)m + s + 2^k' into their parent, level by
// level from the finest classes up. Output sorted by input class.
std::vector<PrefixRule> normalise(std::vector<PrefixRule> rules) {
  std::map<std::size_t, std::map<Nat, PrefixRule>> levels;
  std::size_t deepest = 0;
  for (auto& r : rules) {
    deepest = std::max(deepest, r.in_bits);
    levels[r.in_bits].emplace(r.in_residue, std::move(r));
  }
  for (std::size_t level = deepest; level >= 1; --level) {
    auto it = levels.find(level);
    if (it == levels.end()) {
      continue;
    }
    auto& row = it->second;
    const Nat half_in = pow2(level - 1);
    for (auto cur = row.begin(); cur != row.end();) {
      const PrefixRule& r = cur->second;
      if (r.in_residue >= half_in || r.out_bits == 0) {
        ++cur;
        continue;
      }
      const Nat half_out = pow2(r.out_bits - 1);
      auto sib = row.find(r.in_residue + half_in);
      if (sib == row.end() || r.out_residue >= half_out || sib->second.out_bits != r.out_bits ||
          sib->second.out_residue != r.out_residue + half_out) {
        ++cur;
        continue;
      }
      PrefixRule parent{level - 1, r.in_residue, r.out_bits - 1, r.out_residue};
      row.erase(sib);
      cur = row.erase(cur);
      levels[level - 1].emplace(parent.in_residue, std::move(parent));
    }
  }
  std::vector<PrefixRule> out;
  for (auto& [bits, row] : levels) {
    for (auto& [res, r] : row) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

// The least point of cls at which two affine rules on cls differ. Two
// distinct affine maps agree on at most one point.
Nat first_difference(const PrefixRule& a, const PrefixRule& b, const DyadicClass& cls) {
  const Nat& n0 = cls.residue;
  if (a.forward(n0) != b.forward(n0)) {
    return n0;
  }
  return n0 + pow2(cls.bits);
}

}  // namespace

// ---------------------------------------------------------------- FiniteMap

FiniteMap FiniteMap::from_pairs(const std::vector<FinitePair>& pairs) {
  FiniteMap map;
  for (const auto& [in, out] : pairs) {
    if (in < 0 || out < 0) {
      throw ArgumentError("finite map pairs must be natural numbers");
    }
    if (map.forward_.count(in) != 0) {
      throw InjectivityError(in, out, "duplicate input " + to_string(in) + " in finite map");
    }
    if (map.backward_.count(out) != 0) {
      throw InjectivityError(in, out,
                             "duplicate output " + to_string(out) + " in finite map (from " +
                                 to_string(map.backward_.at(out)) + " and " + to_string(in) + ")");
    }
    map.forward_.emplace(in, out);
    map.backward_.emplace(out, in);
  }
  return map;
}

MaybeNat FiniteMap::apply(const Nat& n) const {
  auto it = forward_.find(n);
  if (it == forward_.end()) {
    return std::nullopt;
  }
  return it->second;
}

MaybeNat FiniteMap::unapply(const Nat& m) const {
  auto it = backward_.find(m);
  if (it == backward_.end()) {
    return std::nullopt;
  }
  return it->second;
}

FiniteMap FiniteMap::inverse() const {
  FiniteMap inv;
  inv.forward_ = backward_;
  inv.backward_ = forward_;
  return inv;
}

std::vector<FinitePair> FiniteMap::pairs() const {
  std::vector<FinitePair> out;
  out.reserve(forward_.size());
  for (const auto& [in, o] : forward_) {
    out.push_back({in, o});
  }
  return out;
}

// -------------------------------------------------------------- DyadicClass

bool DyadicClass::intersects(const DyadicClass& other) const {
  if (bits <= other.bits) {
    return in_class(other.residue, bits, residue);
  }
  return in_class(residue, other.bits, other.residue);
}

bool DyadicClass::within(const DyadicClass& other) const {
  return bits >= other.bits && in_class(residue, other.bits, other.residue);
}

DyadicClass DyadicClass::half(int bit) const {
  return {bits + 1, bit ? residue + pow2(bits) : residue};
}

// --------------------------------------------------------------- PrefixRule

Nat PrefixRule::forward(const Nat& n) const {
  Nat m = (n - in_residue) >> in_bits;
  m <<= out_bits;
  m += out_residue;
  return m;
}

Nat PrefixRule::backward(const Nat& m) const { return inverse().forward(m); }

PrefixRule PrefixRule::restrict_to(const DyadicClass& sub) const {
  return {sub.bits, sub.residue, out_bits + (sub.bits - in_bits), forward(sub.residue)};
}

// ---------------------------------------------------------------- PrefixMap

std::optional<std::size_t> PrefixMap::Trie::insert(const DyadicClass& cls, std::size_t rule) {
  std::size_t node = 0;
  for (std::size_t d = 0; d < cls.bits; ++d) {
    if (nodes_[node].rule >= 0) {
      return static_cast<std::size_t>(nodes_[node].rule);
    }
    const int b = bit_at(cls.residue, d) ? 1 : 0;
    if (nodes_[node].child[b] < 0) {
      nodes_[node].child[b] = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    node = static_cast<std::size_t>(nodes_[node].child[b]);
  }
  if (nodes_[node].rule >= 0) {
    return static_cast<std::size_t>(nodes_[node].rule);
  }
  // Any rule below this node lies inside cls.
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const auto cur = stack.back();
    stack.pop_back();
    if (nodes_[cur].rule >= 0) {
      return static_cast<std::size_t>(nodes_[cur].rule);
    }
    for (auto c : nodes_[cur].child) {
      if (c >= 0) {
        stack.push_back(static_cast<std::size_t>(c));
      }
    }
  }
  nodes_[node].rule = static_cast<std::int64_t>(rule);
  return std::nullopt;
}

std::optional<std::size_t> PrefixMap::Trie::find(const Nat& n) const {
  std::size_t node = 0;
  for (std::size_t d = 0;; ++d) {
    const auto& cur = nodes_[node];
    if (cur.rule >= 0) {
      return static_cast<std::size_t>(cur.rule);
    }
    const auto next = cur.child[bit_at(n, d) ? 1 : 0];
    if (next < 0) {
      return std::nullopt;
    }
    node = static_cast<std::size_t>(next);
  }
}

void PrefixMap::index() {
  inputs_ = Trie{};
  outputs_ = Trie{};
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (auto clash = inputs_.insert(rules_[i].input_class(), i)) {
      throw OverlapError(*clash, i,
                         "input classes of rules " + rule_text(rules_[*clash]) + " and " +
                             rule_text(rules_[i]) + " intersect");
    }
    if (auto clash = outputs_.insert(rules_[i].output_class(), i)) {
      throw OverlapError(*clash, i,
                         "output classes of rules " + rule_text(rules_[*clash]) + " and " +
                             rule_text(rules_[i]) + " intersect");
    }
  }
}

PrefixMap PrefixMap::from_rules(std::vector<PrefixRule> rules) {
  for (const auto& r : rules) {
    if (r.in_residue < 0 || r.in_residue >= pow2(r.in_bits) || r.out_residue < 0 ||
        r.out_residue >= pow2(r.out_bits)) {
      throw ArgumentError("prefix rule " + rule_text(r) + " has a residue outside its modulus");
    }
  }
  // Validate before merging so errors name the caller's rules.
  PrefixMap raw;
  raw.rules_ = std::move(rules);
  raw.index();
  return from_disjoint_rules(std::move(raw.rules_));
}

PrefixMap PrefixMap::from_disjoint_rules(std::vector<PrefixRule> rules) {
  PrefixMap map;
  map.rules_ = normalise(std::move(rules));
  map.index();
  return map;
}

MaybeNat PrefixMap::apply(const Nat& n) const {
  if (auto i = inputs_.find(n)) {
    return rules_[*i].forward(n);
  }
  return std::nullopt;
}

MaybeNat PrefixMap::unapply(const Nat& m) const {
  if (auto i = outputs_.find(m)) {
    return rules_[*i].backward(m);
  }
  return std::nullopt;
}

std::optional<std::size_t> PrefixMap::rule_for_input(const Nat& n) const { return inputs_.find(n); }

std::optional<std::size_t> PrefixMap::rule_for_output(const Nat& m) const {
  return outputs_.find(m);
}

PrefixMap PrefixMap::inverse() const {
  std::vector<PrefixRule> inv;
  inv.reserve(rules_.size());
  for (const auto& r : rules_) {
    inv.push_back(r.inverse());
  }
  return from_disjoint_rules(std::move(inv));
}

// ------------------------------------------------------------------ LazyMap

class LazyMap::Memo {
 public:
  std::optional<MaybeNat> find(const Nat& n) {
    std::lock_guard lock(mutex_);
    auto it = table_.find(n);
    if (it == table_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  void store(const Nat& n, const MaybeNat& value) {
    std::lock_guard lock(mutex_);
    table_.emplace(n, value);
  }

 private:
  std::mutex mutex_;
  std::unordered_map<Nat, MaybeNat, NatHash> table_;
};

LazyMap::LazyMap(PointFn forward, PointFn backward, bool memoize)
    : forward_(std::move(forward)), backward_(std::move(backward)) {
  if (memoize) {
    forward_memo_ = std::make_shared<Memo>();
    backward_memo_ = std::make_shared<Memo>();
  }
}

MaybeNat LazyMap::apply(const Nat& n) const {
  if (!forward_memo_) {
    return forward_(n);
  }
  if (auto hit = forward_memo_->find(n)) {
    return *hit;
  }
  auto value = forward_(n);
  forward_memo_->store(n, value);
  return value;
}

MaybeNat LazyMap::unapply(const Nat& m) const {
  if (!backward_memo_) {
    return backward_(m);
  }
  if (auto hit = backward_memo_->find(m)) {
    return *hit;
  }
  auto value = backward_(m);
  backward_memo_->store(m, value);
  return value;
}

LazyMap LazyMap::inverse() const {
  LazyMap inv(backward_, forward_);
  inv.forward_memo_ = backward_memo_;
  inv.backward_memo_ = forward_memo_;
  return inv;
}

// --------------------------------------------------------- PartialInjection

PartialInjection::PartialInjection(FiniteMap map)
    : rep_(std::make_shared<const Rep>(std::move(map))) {}
PartialInjection::PartialInjection(PrefixMap map)
    : rep_(std::make_shared<const Rep>(std::move(map))) {}
PartialInjection::PartialInjection(LazyMap map)
    : rep_(std::make_shared<const Rep>(std::move(map))) {}

MaybeNat PartialInjection::apply(const Nat& n) const {
  if (n < 0) {
    return std::nullopt;
  }
  return std::visit([&](const auto& m) { return m.apply(n); }, *rep_);
}

MaybeNat PartialInjection::unapply(const Nat& m) const {
  if (m < 0) {
    return std::nullopt;
  }
  return std::visit([&](const auto& r) { return r.unapply(m); }, *rep_);
}

Representation PartialInjection::representation() const {
  switch (rep_->index()) {
    case 0:
      return Representation::finite;
    case 1:
      return Representation::prefix;
    default:
      return Representation::lazy;
  }
}

bool PartialInjection::known_empty() const {
  if (const auto* f = as_finite()) {
    return f->empty();
  }
  if (const auto* p = as_prefix()) {
    return p->empty();
  }
  return false;
}

std::string PartialInjection::describe() const {
  std::ostringstream os;
  if (const auto* f = as_finite()) {
    if (f->empty()) {
      return "zero";
    }
    os << '{';
    bool first = true;
    for (const auto& [in, out] : f->forward()) {
      os << (first ? "" : ", ") << in << "->" << out;
      first = false;
    }
    os << '}';
  } else if (const auto* p = as_prefix()) {
    os << "prefix[";
    bool first = true;
    for (const auto& r : p->rules()) {
      os << (first ? "" : ", ") << rule_text(r);
      first = false;
    }
    os << ']';
  } else {
    os << "<lazy>";
  }
  return os.str();
}

// ------------------------------------------------------------ CheckOutcome

bool holds(const CheckOutcome& outcome) { return !std::holds_alternative<Fails>(outcome); }

std::string to_string(const CheckOutcome& outcome) {
  if (std::holds_alternative<HoldsExactly>(outcome)) {
    return "HoldsExactly";
  }
  if (const auto* up = std::get_if<HoldsUpTo>(&outcome)) {
    return "HoldsUpTo(" + to_string(up->bound) + ")";
  }
  const auto& f = std::get<Fails>(outcome);
  return "Fails(witness " + to_string(f.witness) + ", lhs " + to_string(f.lhs) + ", rhs " +
         to_string(f.rhs) + ")";
}

// --------------------------------------------------------------- operations

MaybeNat apply(const PartialInjection& f, const Nat& n) { return f.apply(n); }
MaybeNat unapply(const PartialInjection& f, const Nat& m) { return f.unapply(m); }

PartialInjection identity() { return PrefixMap::from_disjoint_rules({PrefixRule{0, 0, 0, 0}}); }

PartialInjection zero_map() { return FiniteMap{}; }

PartialInjection make_finite(const std::vector<FinitePair>& pairs) {
  return FiniteMap::from_pairs(pairs);
}

PartialInjection make_prefix(std::vector<PrefixRule> rules) {
  return PrefixMap::from_rules(std::move(rules));
}

PartialInjection make_lazy(PointFn forward, PointFn backward, bool memoize) {
  return LazyMap(std::move(forward), std::move(backward), memoize);
}

namespace {

PrefixMap compose_prefix(const PrefixMap& f, const PrefixMap& g) {
  std::vector<PrefixRule> out;
  for (const auto& gr : g.rules()) {
    for (const auto& fr : f.rules()) {
      if (!gr.output_class().intersects(fr.input_class())) {
        continue;
      }
      if (gr.out_bits >= fr.in_bits) {
        // g's image class sits inside f's input class.
        Nat offset = (gr.out_residue - fr.in_residue) >> fr.in_bits;
        out.push_back({gr.in_bits, gr.in_residue, fr.out_bits + gr.out_bits - fr.in_bits,
                       (offset << fr.out_bits) + fr.out_residue});
      } else {
        // Restrict g's input so that its image lands in f's input class.
        Nat j = (fr.in_residue - gr.out_residue) >> gr.out_bits;
        out.push_back({gr.in_bits + fr.in_bits - gr.out_bits, (j << gr.in_bits) + gr.in_residue,
                       fr.out_bits, fr.out_residue});
      }
    }
  }
  return PrefixMap::from_disjoint_rules(std::move(out));
}

PartialInjection lazy_join(PartialInjection f, PartialInjection g) {
  auto forward = [f, g](const Nat& n) -> MaybeNat {
    auto a = f.apply(n);
    auto b = g.apply(n);
    if (a && b) {
      if (*a != *b) {
        throw CompatibilityError(n, "images " + to_string(*a) + " and " + to_string(*b));
      }
      return a;
    }
    if (a) {
      if (auto other = g.unapply(*a)) {
        throw CompatibilityError(n, to_string(n) + " and " + to_string(*other) +
                                        " both map to " + to_string(*a));
      }
      return a;
    }
    if (b) {
      if (auto other = f.unapply(*b)) {
        throw CompatibilityError(n, to_string(n) + " and " + to_string(*other) +
                                        " both map to " + to_string(*b));
      }
      return b;
    }
    return std::nullopt;
  };
  auto backward = [f, g](const Nat& m) -> MaybeNat {
    auto a = f.unapply(m);
    auto b = g.unapply(m);
    if (a && b) {
      if (*a != *b) {
        throw CompatibilityError(*a, to_string(*a) + " and " + to_string(*b) + " both map to " +
                                         to_string(m));
      }
      return a;
    }
    if (a) {
      if (auto other = g.apply(*a)) {
        throw CompatibilityError(*a, "images " + to_string(m) + " and " + to_string(*other));
      }
      return a;
    }
    if (b) {
      if (auto other = f.apply(*b)) {
        throw CompatibilityError(*b, "images " + to_string(m) + " and " + to_string(*other));
      }
      return b;
    }
    return std::nullopt;
  };
  return make_lazy(std::move(forward), std::move(backward));
}

FiniteMap join_finite(const FiniteMap& f, const FiniteMap& g) {
  std::vector<FinitePair> pairs = f.pairs();
  for (const auto& [in, out] : g.forward()) {
    if (auto mine = f.apply(in)) {
      if (*mine != out) {
        throw CompatibilityError(in, "images " + to_string(*mine) + " and " + to_string(out));
      }
      continue;
    }
    if (auto other = f.unapply(out)) {
      throw CompatibilityError(std::min(in, *other), to_string(in) + " and " + to_string(*other) +
                                                         " both map to " + to_string(out));
    }
    pairs.push_back({in, out});
  }
  return FiniteMap::from_pairs(pairs);
}

// Every pair of the finite map must already be consistent with the prefix
// map, both ways round.
void check_finite_against(const FiniteMap& f, const PartialInjection& g) {
  for (const auto& [in, out] : f.forward()) {
    auto image = g.apply(in);
    if (image && *image != out) {
      throw CompatibilityError(in, "images " + to_string(out) + " and " + to_string(*image));
    }
    auto pre = g.unapply(out);
    if (pre && *pre != in) {
      throw CompatibilityError(std::min(in, *pre), to_string(in) + " and " + to_string(*pre) +
                                                       " both map to " + to_string(out));
    }
  }
}

PrefixMap join_prefix(const PrefixMap& f, const PrefixMap& g) {
  const auto& fr = f.rules();
  const auto& gr = g.rules();
  std::vector<bool> drop_f(fr.size(), false);
  std::vector<bool> drop_g(gr.size(), false);
  // Cross pairs with intersecting inputs are nested; the inner rule must agree
  // with the outer one and is then redundant.
  for (std::size_t i = 0; i < fr.size(); ++i) {
    for (std::size_t j = 0; j < gr.size(); ++j) {
      const auto ci = fr[i].input_class();
      const auto cj = gr[j].input_class();
      if (!ci.intersects(cj)) {
        continue;
      }
      const bool g_inner = cj.bits >= ci.bits;
      const auto& inner = g_inner ? gr[j] : fr[i];
      const auto& outer = g_inner ? fr[i] : gr[j];
      const auto restricted = outer.restrict_to(inner.input_class());
      if (restricted != inner) {
        throw CompatibilityError(first_difference(restricted, inner, inner.input_class()));
      }
      (g_inner ? drop_g[j] : drop_f[i]) = true;
    }
  }
  std::vector<PrefixRule> kept;
  std::vector<int> side;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (!drop_f[i]) {
      kept.push_back(fr[i]);
      side.push_back(0);
    }
  }
  for (std::size_t j = 0; j < gr.size(); ++j) {
    if (!drop_g[j]) {
      kept.push_back(gr[j]);
      side.push_back(1);
    }
  }
  // Remaining inputs are disjoint; any output overlap is a real collision.
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      if (side[a] == side[b] || !kept[a].output_class().intersects(kept[b].output_class())) {
        continue;
      }
      const auto& wide = kept[a].out_bits <= kept[b].out_bits ? kept[a] : kept[b];
      const auto& narrow = kept[a].out_bits <= kept[b].out_bits ? kept[b] : kept[a];
      // The narrow rule's least input lands inside the wide rule's range.
      const Nat w1 = narrow.in_residue;
      const Nat w2 = wide.backward(narrow.out_residue);
      throw CompatibilityError(std::min(w1, w2), "two inputs share the output " +
                                                     to_string(narrow.out_residue));
    }
  }
  return PrefixMap::from_disjoint_rules(std::move(kept));
}

struct LeqSearch {
  const PrefixMap& g;
  std::optional<Fails> best;

  void record(const Nat& witness, MaybeNat lhs, MaybeNat rhs) {
    if (!best || witness < best->witness) {
      best = Fails{witness, std::move(lhs), std::move(rhs)};
    }
  }

  // Checks that the rule f_rule, restricted to cls, is contained in g.
  void cover(const PrefixRule& f_rule, const DyadicClass& cls) {
    bool any_inside = false;
    for (const auto& gr : g.rules()) {
      const auto gc = gr.input_class();
      if (!gc.intersects(cls)) {
        continue;
      }
      if (cls.within(gc)) {
        const auto mine = f_rule.restrict_to(cls);
        const auto theirs = gr.restrict_to(cls);
        if (mine != theirs) {
          const Nat w = first_difference(mine, theirs, cls);
          record(w, mine.forward(w), theirs.forward(w));
        }
        return;
      }
      any_inside = true;
    }
    if (!any_inside) {
      record(cls.residue, f_rule.forward(cls.residue), std::nullopt);
      return;
    }
    cover(f_rule, cls.half(0));
    cover(f_rule, cls.half(1));
  }
};

CheckOutcome leq_bounded(const PartialInjection& f, const PartialInjection& g, const Nat& bound) {
  for (Nat n = 0; n < bound; ++n) {
    auto a = f.apply(n);
    if (!a) {
      continue;
    }
    auto b = g.apply(n);
    if (b != a) {
      return Fails{n, std::move(a), std::move(b)};
    }
  }
  return HoldsUpTo{bound};
}

}  // namespace

PartialInjection compose(const PartialInjection& f, const PartialInjection& g) {
  if (f.known_empty() || g.known_empty()) {
    return zero_map();
  }
  const auto* ff = f.as_finite();
  const auto* gf = g.as_finite();
  const auto* fp = f.as_prefix();
  const auto* gp = g.as_prefix();
  if (gf && (ff || fp)) {
    std::vector<FinitePair> pairs;
    for (const auto& [in, mid] : gf->forward()) {
      if (auto out = f.apply(mid)) {
        pairs.push_back({in, *out});
      }
    }
    return make_finite(pairs);
  }
  if (ff && gp) {
    std::vector<FinitePair> pairs;
    for (const auto& [mid, out] : ff->forward()) {
      if (auto in = gp->unapply(mid)) {
        pairs.push_back({*in, out});
      }
    }
    return make_finite(pairs);
  }
  if (fp && gp) {
    return compose_prefix(*fp, *gp);
  }
  return make_lazy(
      [f, g](const Nat& n) -> MaybeNat {
        auto mid = g.apply(n);
        return mid ? f.apply(*mid) : std::nullopt;
      },
      [f, g](const Nat& m) -> MaybeNat {
        auto mid = f.unapply(m);
        return mid ? g.unapply(*mid) : std::nullopt;
      });
}

PartialInjection gen_inverse(const PartialInjection& f) {
  if (const auto* ff = f.as_finite()) {
    return ff->inverse();
  }
  if (const auto* fp = f.as_prefix()) {
    return fp->inverse();
  }
  return f.as_lazy()->inverse();
}

PartialInjection join(const PartialInjection& f, const PartialInjection& g) {
  if (f.known_empty()) {
    return g;
  }
  if (g.known_empty()) {
    return f;
  }
  const auto* ff = f.as_finite();
  const auto* gf = g.as_finite();
  const auto* fp = f.as_prefix();
  const auto* gp = g.as_prefix();
  if (ff && gf) {
    return join_finite(*ff, *gf);
  }
  if (fp && gp) {
    return join_prefix(*fp, *gp);
  }
  if ((ff && gp) || (fp && gf)) {
    const auto& finite = ff ? *ff : *gf;
    const auto& prefix = ff ? g : f;
    check_finite_against(finite, prefix);
    bool contained = true;
    for (const auto& [in, out] : finite.forward()) {
      contained = contained && prefix.apply(in).has_value();
    }
    if (contained) {
      return prefix;
    }
  }
  return lazy_join(f, g);
}

CheckOutcome leq(const PartialInjection& f, const PartialInjection& g, const Nat& bound) {
  if (bound < 1) {
    throw ArgumentError("leq needs bound >= 1");
  }
  if (f.known_empty()) {
    return HoldsExactly{};
  }
  if (const auto* ff = f.as_finite()) {
    for (const auto& [in, out] : ff->forward()) {
      auto image = g.apply(in);
      if (image != out) {
        return Fails{in, out, std::move(image)};
      }
    }
    return HoldsExactly{};
  }
  const auto* fp = f.as_prefix();
  if (fp && g.as_finite()) {
    // An infinite domain is never below a finite map; find the least witness.
    for (Nat n = 0;; ++n) {
      auto a = fp->apply(n);
      if (!a) {
        continue;
      }
      auto b = g.apply(n);
      if (b != a) {
        return Fails{n, std::move(a), std::move(b)};
      }
    }
  }
  if (fp && g.as_prefix()) {
    LeqSearch search{*g.as_prefix(), std::nullopt};
    for (const auto& r : fp->rules()) {
      search.cover(r, r.input_class());
    }
    if (search.best) {
      return *search.best;
    }
    return HoldsExactly{};
  }
  return leq_bounded(f, g, bound);
}

CheckOutcome equal_on(const PartialInjection& f, const PartialInjection& g, const Nat& bound) {
  if (bound < 1) {
    throw ArgumentError("equal_on needs bound >= 1");
  }
  for (Nat n = 0; n < bound; ++n) {
    auto a = f.apply(n);
    auto b = g.apply(n);
    if (a != b) {
      return Fails{n, std::move(a), std::move(b)};
    }
  }
  return HoldsUpTo{bound};
}

PartialInjection domain_id(const PartialInjection& f) {
  if (f.symbolic()) {
    return compose(gen_inverse(f), f);
  }
  auto restrict = [f](const Nat& n) -> MaybeNat {
    return f.apply(n) ? MaybeNat(n) : std::nullopt;
  };
  return make_lazy(restrict, restrict);
}

PartialInjection range_id(const PartialInjection& f) {
  if (f.symbolic()) {
    return compose(f, gen_inverse(f));
  }
  auto restrict = [f](const Nat& m) -> MaybeNat {
    return f.unapply(m) ? MaybeNat(m) : std::nullopt;
  };
  return make_lazy(restrict, restrict);
}

PartialInjection power(const PartialInjection& f, std::size_t k) {
  if (k == 0) {
    return identity();
  }
  if (f.symbolic()) {
    PartialInjection result = identity();
    PartialInjection base = f;
    while (k > 0) {
      if (k & 1u) {
        result = compose(base, result);
      }
      k >>= 1;
      if (k > 0) {
        base = compose(base, base);
      }
    }
    return result;
  }
  return make_lazy(
      [f, k](const Nat& n) -> MaybeNat {
        MaybeNat cur = n;
        for (std::size_t i = 0; i < k && cur; ++i) {
          cur = f.apply(*cur);
        }
        return cur;
      },
      [f, k](const Nat& m) -> MaybeNat {
        MaybeNat cur = m;
        for (std::size_t i = 0; i < k && cur; ++i) {
          cur = f.unapply(*cur);
        }
        return cur;
      });
}

}  // namespace goi
