#include "goi/expr.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "goi/algebra.hpp"

namespace goi::expr {

ExprPtr atom(std::string name) { return std::make_shared<const Expr>(Expr{Atom{std::move(name)}}); }

ExprPtr rgen(Nat index) { return std::make_shared<const Expr>(Expr{RGen{std::move(index)}}); }

ExprPtr finite_lit(std::vector<FinitePair> pairs) {
  if (pairs.empty()) {
    throw ArgumentError("a finite literal needs at least one pair");
  }
  FiniteMap::from_pairs(pairs);
  return std::make_shared<const Expr>(Expr{FiniteLit{std::move(pairs)}});
}

ExprPtr unary(UnaryOp op, ExprPtr operand) {
  const auto depth = operand->depth + 1;
  return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}, depth});
}

ExprPtr power(ExprPtr base, Nat exponent) {
  const auto depth = base->depth + 1;
  return std::make_shared<const Expr>(Expr{Power{std::move(base), std::move(exponent)}, depth});
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  const auto depth = std::max(lhs->depth, rhs->depth) + 1;
  return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}, depth});
}

bool same(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) {
    return false;
  }
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Atom>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, RGen>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          return x.pairs == y.pairs;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && same(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, Power>) {
          return x.exponent == y.exponent && same(*x.base, *y.base);
        } else {
          return x.op == y.op && same(*x.lhs, *y.lhs) && same(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

const std::set<std::string>& builtin_atoms() {
  static const std::set<std::string> names{"p",     "q",   "id",   "zero",  "succ",
                                           "tau",   "sigma", "tau2", "sigma2"};
  return names;
}

ParseError::ParseError(std::size_t position, std::string message,
                       std::vector<std::string> expected)
    : Error("parse error at offset " + std::to_string(position) + ": " + message),
      position_(position),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

// ------------------------------------------------------------------- lexer

namespace {

enum class Tok { ident, nat, sym, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
      }
      out.push_back({Tok::nat, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (c == '-') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Tok::sym, "->", start});
        i += 2;
        continue;
      }
      throw ParseError(start, "'-' must be followed by '>'", {"'->'"});
    }
    static constexpr std::string_view singles = "+.*&!?~^(){},";
    if (singles.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::sym, std::string(1, static_cast<char>(c)), start});
      ++i;
      continue;
    }
    throw ParseError(start, "unexpected character", {});
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

// ------------------------------------------------------------------ parser

const std::vector<std::string>& term_starts() {
  static const std::vector<std::string> starts{"name", "'r('", "'ex('", "'{'", "'('", "'!'",
                                               "'?'"};
  return starts;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::set<std::string>& extra)
      : tokens_(std::move(tokens)), extra_(extra) {}

  ExprPtr parse_all() {
    auto e = parse_join();
    if (peek().kind != Tok::end) {
      throw ParseError(peek().pos, "unexpected '" + peek().text + "'",
                       {"'+'", "'.'", "'*'", "'&'", "'~'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  bool is_sym(std::string_view s) const { return peek().kind == Tok::sym && peek().text == s; }
  const Token& take() { return tokens_[at_++]; }

  void expect_sym(std::string_view s) {
    if (!is_sym(s)) {
      throw ParseError(peek().pos, describe_found(), {"'" + std::string(s) + "'"});
    }
    ++at_;
  }

  Nat expect_nat() {
    if (peek().kind != Tok::nat) {
      throw ParseError(peek().pos, describe_found(), {"natural number"});
    }
    return parse_nat(take().text);
  }

  std::string describe_found() const {
    if (peek().kind == Tok::end) {
      return "unexpected end of input";
    }
    return "unexpected '" + peek().text + "'";
  }

  ExprPtr bounded(ExprPtr e, std::size_t pos) const {
    if (e->depth > max_depth) {
      throw ParseError(pos, "expression nested too deeply", {});
    }
    return e;
  }

  ExprPtr parse_join() {
    auto lhs = parse_comp();
    while (is_sym("+")) {
      const auto pos = take().pos;
      lhs = bounded(binary(BinaryOp::join, lhs, parse_comp()), pos);
    }
    return lhs;
  }

  ExprPtr parse_comp() {
    auto lhs = parse_tensor();
    while (is_sym(".")) {
      const auto pos = take().pos;
      lhs = bounded(binary(BinaryOp::compose, lhs, parse_tensor()), pos);
    }
    return lhs;
  }

  ExprPtr parse_tensor() {
    auto lhs = parse_unary();
    while (is_sym("*") || is_sym("&")) {
      const auto& t = take();
      const auto op = t.text == "*" ? BinaryOp::star : BinaryOp::odot;
      lhs = bounded(binary(op, lhs, parse_unary()), t.pos);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (++depth_ > max_depth) {
      throw ParseError(peek().pos, "expression nested too deeply", {});
    }
    struct Leave {
      std::size_t& d;
      ~Leave() { --d; }
    } leave{depth_};
    if (is_sym("!") || is_sym("?")) {
      const auto& t = take();
      const auto op = t.text == "!" ? UnaryOp::bang : UnaryOp::whimper;
      return bounded(unary(op, parse_unary()), t.pos);
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    auto e = parse_atom();
    for (;;) {
      if (is_sym("~")) {
        e = bounded(unary(UnaryOp::inverse, e), take().pos);
      } else if (is_sym("^")) {
        const auto pos = take().pos;
        e = bounded(power(e, expect_nat()), pos);
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::ident) {
      ++at_;
      if (t.text == "r") {
        expect_sym("(");
        auto j = expect_nat();
        expect_sym(")");
        return rgen(std::move(j));
      }
      if (t.text == "ex") {
        expect_sym("(");
        auto body = parse_join();
        expect_sym(")");
        return unary(UnaryOp::exec, body);
      }
      if (builtin_atoms().count(t.text) != 0 || extra_.count(t.text) != 0) {
        return atom(t.text);
      }
      throw ParseError(t.pos, "unknown name '" + t.text + "'", term_starts());
    }
    if (is_sym("(")) {
      ++at_;
      auto e = parse_join();
      expect_sym(")");
      return e;
    }
    if (is_sym("{")) {
      ++at_;
      std::vector<FinitePair> pairs;
      for (;;) {
        auto in = expect_nat();
        expect_sym("->");
        auto out = expect_nat();
        pairs.push_back({std::move(in), std::move(out)});
        if (is_sym(",")) {
          ++at_;
          continue;
        }
        expect_sym("}");
        break;
      }
      return finite_lit(std::move(pairs));
    }
    throw ParseError(t.pos, describe_found(), term_starts());
  }

  std::vector<Token> tokens_;
  const std::set<std::string>& extra_;
  std::size_t at_ = 0;
  std::size_t depth_ = 0;
};

// ----------------------------------------------------------------- printer

enum Level { join_level = 1, comp_level, tensor_level, unary_level, postfix_level, atom_level };

struct Printed {
  std::string text;
  int level;
};

Printed render(const Expr& e);

std::string wrap(const Printed& p, int min_level) {
  return p.level < min_level ? "(" + p.text + ")" : p.text;
}

Printed render(const Expr& e) {
  return std::visit(
      [](const auto& x) -> Printed {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          return {x.name, atom_level};
        } else if constexpr (std::is_same_v<T, RGen>) {
          return {"r(" + to_string(x.index) + ")", atom_level};
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          std::string s = "{";
          for (std::size_t i = 0; i < x.pairs.size(); ++i) {
            s += (i ? ", " : "") + to_string(x.pairs[i].input) + "->" +
                 to_string(x.pairs[i].output);
          }
          return {s + "}", atom_level};
        } else if constexpr (std::is_same_v<T, Unary>) {
          const auto inner = render(*x.operand);
          switch (x.op) {
            case UnaryOp::inverse:
              return {wrap(inner, postfix_level) + "~", postfix_level};
            case UnaryOp::bang:
              return {"!" + wrap(inner, unary_level), unary_level};
            case UnaryOp::whimper:
              return {"?" + wrap(inner, unary_level), unary_level};
            case UnaryOp::exec:
              break;
          }
          return {"ex(" + inner.text + ")", atom_level};
        } else if constexpr (std::is_same_v<T, Power>) {
          return {wrap(render(*x.base), postfix_level) + "^" + to_string(x.exponent),
                  postfix_level};
        } else {
          int level = join_level;
          std::string sep = " + ";
          switch (x.op) {
            case BinaryOp::join:
              break;
            case BinaryOp::compose:
              level = comp_level;
              sep = " . ";
              break;
            case BinaryOp::star:
              level = tensor_level;
              sep = " * ";
              break;
            case BinaryOp::odot:
              level = tensor_level;
              sep = " & ";
              break;
          }
          return {wrap(render(*x.lhs), level) + sep + wrap(render(*x.rhs), level + 1), level};
        }
      },
      e.node);
}

}  // namespace

ExprPtr parse(std::string_view text, const std::set<std::string>& extra_names) {
  Parser parser(lex(text), extra_names);
  return parser.parse_all();
}

std::string print_expr(const Expr& e) { return render(e).text; }

// --------------------------------------------------------------- evaluator

PartialInjection builtin(const std::string& name) {
  if (name == "p") {
    return gen_p();
  }
  if (name == "q") {
    return gen_q();
  }
  if (name == "id") {
    return identity();
  }
  if (name == "zero") {
    return zero_map();
  }
  if (name == "tau") {
    return tau_star();
  }
  if (name == "sigma") {
    return sigma_star();
  }
  if (name == "tau2") {
    return tau_odot();
  }
  if (name == "sigma2") {
    return sigma_odot();
  }
  if (name == "succ") {
    return make_lazy([](const Nat& n) -> MaybeNat { return n + 1; },
                     [](const Nat& m) -> MaybeNat {
                       if (m == 0) {
                         return std::nullopt;
                       }
                       return m - 1;
                     });
  }
  throw ArgumentError("unknown atom '" + name + "'");
}

PartialInjection eval_expr(const Expr& e, const Environment& env) {
  return std::visit(
      [&](const auto& x) -> PartialInjection {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          if (builtin_atoms().count(x.name) != 0) {
            return builtin(x.name);
          }
          auto it = env.find(x.name);
          if (it == env.end()) {
            throw ArgumentError("unbound name '" + x.name + "'");
          }
          return it->second;
        } else if constexpr (std::is_same_v<T, RGen>) {
          return r_gen(to_size(x.index, max_exponent));
        } else if constexpr (std::is_same_v<T, FiniteLit>) {
          return make_finite(x.pairs);
        } else if constexpr (std::is_same_v<T, Unary>) {
          auto inner = eval_expr(*x.operand, env);
          switch (x.op) {
            case UnaryOp::inverse:
              return gen_inverse(inner);
            case UnaryOp::bang:
              return bang(inner);
            case UnaryOp::whimper:
              return whimper(inner);
            case UnaryOp::exec:
              break;
          }
          return exec(inner);
        } else if constexpr (std::is_same_v<T, Power>) {
          return goi::power(eval_expr(*x.base, env), to_size(x.exponent, max_exponent));
        } else {
          auto lhs = eval_expr(*x.lhs, env);
          auto rhs = eval_expr(*x.rhs, env);
          switch (x.op) {
            case BinaryOp::compose:
              return compose(lhs, rhs);
            case BinaryOp::star:
              return star(lhs, rhs);
            case BinaryOp::odot:
              return odot(lhs, rhs);
            case BinaryOp::join:
              break;
          }
          return join(lhs, rhs);
        }
      },
      e.node);
}

}  // namespace goi::expr
