#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "goi/algebra.hpp"
#include "goi/errors.hpp"
#include "goi/expr.hpp"
#include "goi/lawcheck.hpp"

namespace goi::cli {

namespace {

constexpr const char* grammar_help = R"(Expressions:
  f + g      join (lowest precedence)
  f . g      composition, f after g
  f * g      star tensor      f & g   odot tensor
  !f  ?f     bang, whimper
  f~  f^N    inverse, N-fold power (tightest)
  atoms: p q id zero succ tau sigma tau2 sigma2 r(N) ex(f) {0->3, 1->5}
'.' binds looser than '*' and '&', so "p~ . f . p" is a composite of three maps.
'succ' (n -> n+1) is an extension for writing divergent exec examples.)";

enum class Format { tsv, json };

nlohmann::json nat_json(const MaybeNat& v) {
  if (!v) return nullptr;
  if (*v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(*v);
  return to_string(*v);
}

void report_parse_error(const expr::ParseError& e, std::ostream& err) {
  err << "error: " << e.what();
  if (!e.expected().empty()) {
    err << " (expected";
    for (std::size_t i = 0; i < e.expected().size(); ++i) err << (i ? ", " : " ") << e.expected()[i];
    err << ')';
  }
  err << '\n';
}

// Parse and evaluate. Returns false after printing an error.
bool build(const std::string& text, const expr::Environment& env, expr::ExprPtr& e,
           PartialInjection& f, std::ostream& err) {
  std::set<std::string> names;
  for (const auto& [k, _] : env) names.insert(k);
  try {
    e = expr::parse(text, names);
    f = expr::eval_expr(*e, env);
    return true;
  } catch (const expr::ParseError& ex) {
    report_parse_error(ex, err);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
  }
  return false;
}

// Prints rows n < bound. Returns 1 if evaluation failed part-way.
int print_table(const std::string& shown, const PartialInjection& f, std::uint64_t bound,
                Format fmt, std::ostream& out, std::ostream& err) {
  nlohmann::json values = nlohmann::json::array();
  if (fmt == Format::tsv) out << "n\tvalue\n";
  for (std::uint64_t n = 0; n < bound; ++n) {
    MaybeNat v;
    try {
      v = f.apply(Nat(n));
    } catch (const Error& ex) {
      out.flush();
      err << "error: at n=" << n << ": " << ex.what() << '\n';
      return 1;
    }
    if (fmt == Format::tsv)
      out << n << '\t' << to_string(v) << '\n';
    else
      values.push_back(nlohmann::json::array({n, nat_json(v)}));
  }
  if (fmt == Format::json) {
    nlohmann::json doc{{"expr", shown}, {"bound", bound}, {"values", values}};
    out << doc.dump() << '\n';
  }
  return 0;
}

int cmd_eval(const std::string& text, std::uint64_t bound, Format fmt, std::ostream& out,
             std::ostream& err) {
  expr::ExprPtr e;
  PartialInjection f = zero_map();
  if (!build(text, {}, e, f, err)) return 2;
  return print_table(expr::print_expr(*e), f, bound, fmt, out, err);
}

int cmd_check(const std::string& law, std::uint64_t bound, std::size_t samples,
              std::uint64_t seed, Format fmt, std::ostream& out, std::ostream& err) {
  std::vector<const lawcheck::LawSpec*> laws;
  if (law == "all") {
    for (const auto& l : lawcheck::registry()) laws.push_back(&l);
  } else {
    try {
      laws.push_back(&lawcheck::find_law(law));
    } catch (const UnknownLawError& ex) {
      err << "error: " << ex.what() << '\n';
      return 2;
    }
  }
  std::vector<lawcheck::LawReport> reports;
  bool failed = false;
  if (fmt == Format::tsv) out << "law\tverdict\tbound\tsamples\tseed\telapsed_ms\n";
  for (const auto* l : laws) {
    auto r = lawcheck::run_law(*l, bound, samples, seed);
    failed = failed || !holds(r.outcome);
    if (fmt == Format::tsv) {
      out << lawcheck::to_tsv(r) << '\n';
      for (const auto& w : r.witnesses) {
        out << "  witness\t";
        for (std::size_t i = 0; i < w.inputs.size(); ++i) out << (i ? " " : "") << w.inputs[i];
        out << '\t' << w.equation << "\tn=" << to_string(w.point) << "\tlhs=" << to_string(w.lhs)
            << "\trhs=" << to_string(w.rhs);
        if (!w.error.empty()) out << '\t' << w.error;
        out << '\n';
      }
      out.flush();
    } else {
      reports.push_back(std::move(r));
    }
  }
  if (fmt == Format::json) out << lawcheck::to_json(reports) << '\n';
  return failed ? 1 : 0;
}

int cmd_exec(const std::string& text, const std::string& input, std::size_t max_steps,
             std::ostream& out, std::ostream& err) {
  Nat n;
  try {
    n = parse_nat(input);
  } catch (const Error& ex) {
    err << "error: --input: " << ex.what() << '\n';
    return 2;
  }
  expr::ExprPtr e;
  PartialInjection f = zero_map();
  if (!build(text, {}, e, f, err)) return 2;
  ExecResult r;
  try {
    r = exec_eval(f, n, max_steps, true);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  out << "trace: " << to_string(Nat(2 * n));
  for (const auto& u : r.trace) out << ' ' << to_string(u);
  out << '\n';
  switch (r.status) {
    case ExecStatus::value:
      out << "outcome: Value(" << to_string(r.value) << ")\n";
      return 0;
    case ExecStatus::undefined:
      out << "outcome: Undefined\n";
      return 0;
    case ExecStatus::diverged:
      out << "outcome: Diverged(after " << max_steps << " steps)\n";
      return 1;
  }
  return 0;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_binding_name(const std::string& name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return !expr::builtin_atoms().count(name) && name != "r" && name != "ex" && name != "let";
}

int cmd_repl(std::uint64_t bound, std::istream& in, std::ostream& out, std::ostream& err,
             bool interactive) {
  expr::Environment env;
  std::string line;
  for (;;) {
    if (interactive) out << "goi> " << std::flush;
    if (!std::getline(in, line)) break;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == ":quit" || line == ":q") break;
    if (line == ":help") {
      out << "let NAME = EXPR | EXPR | :bound N | :quit\n" << grammar_help << '\n';
      continue;
    }
    if (line.rfind(":bound", 0) == 0) {
      try {
        auto b = parse_nat(trim(line.substr(6)));
        bound = to_size(b, std::size_t{1} << 20);
      } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
      }
      continue;
    }
    if (line.rfind("let ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        err << "error: expected 'let NAME = EXPR'\n";
        continue;
      }
      auto name = trim(line.substr(4, eq - 4));
      if (!valid_binding_name(name)) {
        err << "error: cannot bind '" << name << "'\n";
        continue;
      }
      expr::ExprPtr e;
      PartialInjection f = zero_map();
      if (build(line.substr(eq + 1), env, e, f, err)) {
        env.insert_or_assign(name, f);
        out << name << " = " << expr::print_expr(*e) << '\n';
      }
      continue;
    }
    expr::ExprPtr e;
    PartialInjection f = zero_map();
    if (build(line, env, e, f, err)) print_table(expr::print_expr(*e), f, bound, Format::tsv, out, err);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err, bool interactive) {
  CLI::App app{"Partial injections of the naturals: evaluate terms, check laws, run exec.", "goi"};
  app.footer(grammar_help);
  app.require_subcommand(1, 1);

  std::map<std::string, Format> formats{{"tsv", Format::tsv}, {"json", Format::json}};

  std::string text, input, law = "all";
  std::uint64_t bound = 16, seed = 0;
  std::uint64_t check_bound = 0;
  std::size_t samples = lawcheck::default_samples, max_steps = 1000;
  Format fmt = Format::tsv;

  auto* eval = app.add_subcommand("eval", "print n and f(n) for n < bound");
  eval->add_option("expr", text, "expression")->required();
  eval->add_option("--bound", bound, "table size")->capture_default_str();
  eval->add_option("--format", fmt, "tsv or json")->transform(CLI::CheckedTransformer(formats));

  auto* check = app.add_subcommand("check", "check algebraic laws on a bounded prefix");
  check->add_option("--law", law, "law name or 'all'")->capture_default_str();
  check->add_option("--bound", check_bound, "prefix bound (0 = the law's default)");
  check->add_option("--samples", samples, "random instantiations")->capture_default_str();
  check->add_option("--seed", seed, "random seed")->capture_default_str();
  check->add_option("--format", fmt, "tsv or json")->transform(CLI::CheckedTransformer(formats));

  auto* ex = app.add_subcommand("exec", "run the token loop of exec(f) from one input");
  ex->add_option("expr", text, "expression")->required();
  ex->add_option("--input", input, "start point n")->required();
  ex->add_option("--max-steps", max_steps, "step budget")->capture_default_str();

  auto* repl = app.add_subcommand("repl", "read-eval-print loop (let NAME = EXPR)");
  repl->add_option("--bound", bound, "table size")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) return cmd_eval(text, bound, fmt, out, err);
    if (check->parsed()) return cmd_check(law, check_bound, samples, seed, fmt, out, err);
    if (ex->parsed()) return cmd_exec(text, input, max_steps, out, err);
    if (repl->parsed()) return cmd_repl(bound, in, out, err, interactive);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace goi::cli
