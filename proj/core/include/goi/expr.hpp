#pragma once

// Term language over the algebra.
//
//   expr    := join
//   join    := comp ('+' comp)*                 join
//   comp    := tensor ('.' tensor)*             f.g = f after g
//   tensor  := unary (('*' | '&') unary)*       star, odot
//   unary   := '!' unary | '?' unary | postfix  bang, whimper
//   postfix := atom ('~' | '^' NAT)*            inverse, power
//   atom    := p | q | id | zero | succ | tau | sigma | tau2 | sigma2
//            | 'r' '(' NAT ')' | 'ex' '(' expr ')'
//            | '{' NAT '->' NAT (',' NAT '->' NAT)* '}' | '(' expr ')'
//
// Binary operators are left-associative. '.' binds looser than '*' and '&' so
// a word like "p~ . f . p" reads as a composite of three maps. "succ"
// (n ↦ n+1) is an extension used to write divergent token loops.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "goi/pinj.hpp"

namespace goi::expr {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnaryOp { inverse, bang, whimper, exec };
enum class BinaryOp { compose, star, odot, join };

struct Atom {
  std::string name;
};
struct RGen {
  Nat index;
};
struct FiniteLit {
  std::vector<FinitePair> pairs;  // nonempty, injective
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Power {
  ExprPtr base;
  Nat exponent;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<Atom, RGen, FiniteLit, Unary, Power, Binary> node;
  std::size_t depth = 1;  // height of the tree, maintained by the constructors below
};

ExprPtr atom(std::string name);
ExprPtr rgen(Nat index);
// Throws InjectivityError (or ArgumentError when empty).
ExprPtr finite_lit(std::vector<FinitePair> pairs);
ExprPtr unary(UnaryOp op, ExprPtr operand);
ExprPtr power(ExprPtr base, Nat exponent);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

// Structural equality.
bool same(const Expr& a, const Expr& b);

// Built-in atom names.
const std::set<std::string>& builtin_atoms();

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string message, std::vector<std::string> expected);
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string message_;
  std::vector<std::string> expected_;
};

// Trees taller than this are rejected with a ParseError.
inline constexpr std::size_t max_depth = 2000;

// extra_names are accepted as atoms in addition to the built-ins (REPL
// bindings). Throws ParseError, or InjectivityError for a bad literal.
ExprPtr parse(std::string_view text, const std::set<std::string>& extra_names = {});

// Minimal parentheses; parse(print_expr(e)) is structurally e.
std::string print_expr(const Expr& e);

using Environment = std::map<std::string, PartialInjection>;

// Exponents of '^' and indices of r(j) are capped; larger values raise
// ArgumentError. Unknown atoms raise ArgumentError.
inline constexpr std::size_t max_exponent = std::size_t{1} << 16;

PartialInjection eval_expr(const Expr& e, const Environment& env = {});

// The built-in atom as a map; throws ArgumentError for unknown names.
PartialInjection builtin(const std::string& name);

}  // namespace goi::expr
