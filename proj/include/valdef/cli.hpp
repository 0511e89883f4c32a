#pragma once

// The valdef command line. run_cli() parses argv, dispatches one verb and
// returns the process exit code: 0 True/pass, 1 False/fail,
// 2 indeterminate, 64 usage or malformed input.

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "valdef/construction.hpp"
#include "valdef/element_text.hpp"
#include "valdef/formula_eval.hpp"
#include "valdef/henselian.hpp"
#include "valdef/report.hpp"
#include "valdef/solvers.hpp"
#include "valdef/suite.hpp"

namespace valdef::cli {

inline constexpr int kTrue = 0;
inline constexpr int kFalse = 1;
inline constexpr int kUnknown = 2;
inline constexpr int kUsage = 64;

struct RunConfig {
  std::string field;
  std::string x;
  std::string a;
  std::uint32_t p = 2;
  int case_number = 0;  // 0: default
  std::size_t level = 0;  // 0: default
  std::uint64_t seed = 1;
  std::int64_t prec = 64;
  std::size_t samples = 0;  // 0: per-verb default
  bool json = false;
  std::vector<std::string> assign;
  std::vector<std::string> pool;
  std::string formula;
  std::string residue = "Q";
  std::string gamma = "Z";

  PrecisionConfig precision() const {
    PrecisionConfig c;
    c.padic_digits = prec;
    c.series_order = prec;
    return c;
  }
  std::size_t samples_or(std::size_t d) const { return samples ? samples : d; }
};

class Usage : public Error {
 public:
  explicit Usage(const std::string& m) : Error(m) {}
};

namespace detail {

inline int truth_code(Truth t) {
  switch (t) {
    case Truth::True: return kTrue;
    case Truth::False: return kFalse;
    case Truth::InsufficientPrecision: return kUnknown;
  }
  return kUnknown;
}

inline FieldPtr field_of(const RunConfig& c) {
  if (c.field.empty()) throw Usage("--field is required");
  return Field::parse(c.field, c.precision());
}

inline Element element_of(const FieldPtr& f, const std::string& text, const char* flag) {
  if (text.empty()) throw Usage(std::string(flag) + " is required");
  return parse_element(f, text);
}

inline std::optional<SettingCase> case_of(const RunConfig& c) {
  switch (c.case_number) {
    case 0: return std::nullopt;
    case 1: return SettingCase::Kummer;
    case 2: return SettingCase::ArtinSchreier;
    case 3: return SettingCase::Quadratic;
  }
  throw Usage("--case must be 1, 2 or 3");
}

inline std::optional<std::size_t> level_of(const RunConfig& c) {
  if (c.level == 0) return std::nullopt;
  return c.level;
}

inline nlohmann::json decision_json(const Decision& d) {
  nlohmann::json j;
  j["truth"] = to_string(d.truth);
  j["witness"] = d.witness ? to_json(*d.witness) : nlohmann::json(nullptr);
  j["residual"] = d.residual ? nlohmann::json(to_string(*d.residual)) : nlohmann::json(nullptr);
  j["trace"] = d.trace;
  return j;
}

inline nlohmann::json setting_json(const Setting& s) {
  return {{"field", s.field->to_string()}, {"level", s.level}, {"p", s.p}, {"case", to_string(s.kind)}};
}

template <class Json>
inline void text_value(std::ostream& out, const Json& v, const std::string& indent);

// Plain rendering of a report: one "key: value" line per scalar.
template <class Json>
inline void text_object(std::ostream& out, const Json& j, const std::string& indent) {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object() || (v.is_array() && !v.empty() && !v.front().is_primitive())) {
      out << indent << k << ":\n";
      text_value(out, v, indent + "  ");
    } else if (v.is_array()) {
      out << indent << k << ":";
      if (v.empty()) out << " (none)";
      out << "\n";
      for (const auto& e : v) out << indent << "  " << (e.is_string() ? e.template get<std::string>() : e.dump()) << "\n";
    } else {
      out << indent << k << ": " << (v.is_string() ? v.template get<std::string>() : v.dump()) << "\n";
    }
  }
}

template <class Json>
inline void text_value(std::ostream& out, const Json& v, const std::string& indent) {
  if (v.is_object()) {
    // Elements print as their text form.
    if (v.contains("text") && v.contains("field") && v.size() == 3) {
      out << indent << v.at("text").template get<std::string>() << "\n";
      return;
    }
    text_object(out, v, indent);
  } else if (v.is_array()) {
    for (const auto& e : v) {
      out << indent << "-\n";
      text_value(out, e, indent + "  ");
    }
  } else {
    out << indent << (v.is_string() ? v.template get<std::string>() : v.dump()) << "\n";
  }
}

inline void emit(std::ostream& out, const RunConfig& c, nlohmann::json report) {
  if (c.json) {
    out << report.dump(2) << "\n";
    return;
  }
  // Elements nested in the report collapse to text.
  std::function<void(nlohmann::json&)> collapse = [&](nlohmann::json& j) {
    if (j.is_object() && j.contains("text") && j.contains("field") && j.size() == 3) {
      j = j.at("text");
      return;
    }
    if (j.is_structured()) {
      for (auto& e : j) collapse(e);
    }
  };
  collapse(report);
  // Inputs and the decision first, supporting detail after.
  static const std::vector<std::string> first{"verb", "field", "setting", "formula", "c", "a", "x",
                                              "class", "assignment", "decision", "oracle"};
  nlohmann::ordered_json ordered;
  for (const auto& k : first) {
    if (report.contains(k)) ordered[k] = report.at(k);
  }
  for (const auto& [k, v] : report.items()) {
    if (std::find(first.begin(), first.end(), k) == first.end()) ordered[k] = v;
  }
  text_object(out, ordered, "");
}

}  // namespace detail

// --- verbs ---

inline int cmd_solve(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  const Setting s = Setting::make(f, c.p, detail::case_of(c), detail::level_of(c));
  const Element x = detail::element_of(f, c.x, "--x");
  const Decision d = solve(s, x, true);
  nlohmann::json r{{"verb", "solve"}, {"setting", detail::setting_json(s)}, {"c", to_json(x)},
                   {"equation", "f(Y) = c"}, {"decision", detail::decision_json(d)}};
  detail::emit(out, c, r);
  return detail::truth_code(d.truth);
}

inline int cmd_ra_member(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  const Setting s = Setting::make(f, c.p, detail::case_of(c), detail::level_of(c));
  const Element a = c.a.empty() ? Element::uniformizer(f, s.level) : parse_element(f, c.a);
  const Element x = detail::element_of(f, c.x, "--x");
  const Decision d = r_a_contains(s, a, x, true);
  nlohmann::json r{{"verb", "ra-member"},
                   {"setting", detail::setting_json(s)},
                   {"a", to_json(a)},
                   {"x", to_json(x)},
                   {"lemma_b_applies", !a.is_exact_zero() && lemma_b_applies(s, a, x)},
                   {"decision", detail::decision_json(d)}};
  detail::emit(out, c, r);
  return detail::truth_code(d.truth);
}

inline nlohmann::json oracle_json(const Element& x, std::size_t level, Truth decided) {
  const bool in_ring = in_valuation_ring(x, level);
  nlohmann::json j{{"valuation", x.is_exact_zero() ? "infinity" : valuation(x, level).to_string()},
                   {"in_valuation_ring", in_ring}};
  if (decided == Truth::InsufficientPrecision) {
    j["agrees"] = nullptr;
  } else {
    j["agrees"] = (decided == Truth::True) == in_ring;
  }
  return j;
}

inline int cmd_phi_z(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  const Setting s = Setting::make(f, c.p, detail::case_of(c), detail::level_of(c));
  const Element x = detail::element_of(f, c.x, "--x");
  const PhiZEvaluator ev(s, c.seed);
  const Decision d = ev.evaluate(x, true);
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& cert : ev.certificates()) {
    certs.push_back({{"candidate", to_json(cert.candidate)}, {"passed", cert.passed}, {"lines", cert.lines}});
  }
  nlohmann::json r{{"verb", "phi-z"},
                   {"setting", detail::setting_json(s)},
                   {"x", to_json(x)},
                   {"decision", detail::decision_json(d)},
                   {"oracle", oracle_json(x, s.level, d.truth)},
                   {"certificates", certs}};
  detail::emit(out, c, r);
  return detail::truth_code(d.truth);
}

inline int cmd_robinson(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = c.field.empty() ? Field::padic(c.p, c.precision()) : detail::field_of(c);
  const Element x = detail::element_of(f, c.x, "--x");
  const Decision d = robinson_evaluate(x, true);
  nlohmann::json r{{"verb", "robinson"},
                   {"field", f->to_string()},
                   {"formula", to_string(robinson_schema())},
                   {"x", to_json(x)},
                   {"decision", detail::decision_json(d)},
                   {"oracle", oracle_json(x, 1, d.truth)}};
  detail::emit(out, c, r);
  return detail::truth_code(d.truth);
}

inline std::string formula_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline int cmd_eval(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  if (c.formula.empty()) throw Usage("--formula is required");
  const FormulaPtr phi = parse_formula(formula_text(c.formula));
  Assignment env;
  for (const auto& item : c.assign) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Usage("--assign expects name=element, got " + item);
    env.insert_or_assign(item.substr(0, eq), parse_element(f, item.substr(eq + 1)));
  }
  EvalOptions o;
  o.seed = c.seed;
  o.level = detail::level_of(c);
  for (const auto& w : c.pool) o.pool.push_back(parse_element(f, w));
  const Decision d = evaluate(phi, env, f, o);
  nlohmann::json assigned = nlohmann::json::object();
  for (const auto& [k, v] : env) assigned[k] = to_json(v);
  nlohmann::json r{{"verb", "eval"},
                   {"field", f->to_string()},
                   {"formula", to_string(phi)},
                   {"class", classify(phi, o.pool.size()).to_string()},
                   {"assignment", assigned},
                   {"decision", detail::decision_json(d)}};
  detail::emit(out, c, r);
  return detail::truth_code(d.truth);
}

inline int cmd_counterexample(const RunConfig& c, std::ostream& out) {
  const auto inst = ConstructionInstance::make(c.residue, c.gamma, c.precision());
  const std::size_t n = c.samples_or(200);
  const auto hom = inst.check_homomorphism(n, c.seed);
  const auto res = inst.check_valuation_restriction(n, c.seed + 1);
  const auto purity = inst.check_purity();
  const auto w = inst.nondefinability_witness();
  const auto audit = inst.hypothesis_audit();
  auto check_json = [](const CheckReport& r) {
    return nlohmann::json{{"checked", r.checked}, {"failed", r.failed}, {"notes", r.notes}};
  };
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : purity.generators) gens.push_back(g.to_string());
  nlohmann::json r{
      {"verb", "counterexample"},
      {"residue", inst.F()->to_string()},
      {"gamma", inst.gamma().to_string()},
      {"fields", {{"K1", inst.K1()->to_string()}, {"K2", inst.K2()->to_string()}}},
      {"witness",
       {{"element", to_json(w.element)},
        {"v1", w.v1.to_string()},
        {"u", w.u.to_string()},
        {"v2_of_image", w.v2_image.to_string()},
        {"holds", w.holds},
        {"t_is_not_a_witness", w.t_is_not_witness}}},
      {"homomorphism", check_json(hom)},
      {"valuation_restriction", check_json(res)},
      {"purity",
       {{"generators", gens},
        {"pure", purity.pure},
        {"negative_control_impure", purity.negative_control_impure},
        {"map_matches", purity.map_matches}}},
      {"hypothesis_audit",
       {{"residue_char_zero", audit.residue_char_zero},
        {"gamma_regular_quotient", audit.gamma_regular_quotient},
        {"noE_case", audit.noE_case ? nlohmann::json(std::string(1, *audit.noE_case)) : nlohmann::json(nullptr)},
        {"lines", audit.lines}}}};
  detail::emit(out, c, r);
  const bool ok = w.holds && w.t_is_not_witness && hom.passed() && res.passed() && purity.pure &&
                  purity.negative_control_impure && purity.map_matches;
  return ok ? kTrue : kFalse;
}

inline void table_text(std::ostream& out, const FieldPtr& f, const std::vector<TableRow>& rows) {
  out << "field: " << f->to_string() << "\n";
  out << "facts (computed):\n";
  out << "  " << std::left << std::setw(6) << "level" << std::setw(10) << "group" << std::setw(26) << "residue"
      << std::setw(8) << "index" << std::setw(10) << "discrete" << std::setw(8) << "2-reg" << "noE\n";
  for (const auto& r : rows) {
    out << "  " << std::left << std::setw(6) << ("v" + std::to_string(r.level)) << std::setw(10)
        << r.group.to_string() << std::setw(26) << r.residue << std::setw(8)
        << (r.square_class_index ? std::to_string(*r.square_class_index) : "?") << std::setw(10)
        << (r.discrete ? "yes" : "no") << std::setw(8) << (r.two_regular ? "yes" : "no")
        << (r.noE_case ? std::string(1, *r.noE_case) : "-") << "\n";
  }
  out << "definability (cited):\n";
  out << "  " << std::left << std::setw(6) << "level" << std::setw(8) << "E-Mac" << std::setw(8) << "A-Mac"
      << std::setw(8) << "EA-ring" << "AE-ring\n";
  for (const auto& r : rows) {
    out << "  " << std::left << std::setw(6) << ("v" + std::to_string(r.level)) << std::setw(8) << r.exists_mac.value
        << std::setw(8) << r.forall_mac.value << std::setw(8) << r.exists_forall_ring.value
        << r.forall_exists_ring.value << "\n";
  }
  out << "reasons:\n";
  for (const auto& r : rows) {
    const std::string v = "v" + std::to_string(r.level);
    out << "  " << v << " E-Mac: " << r.exists_mac.reason << "\n";
    out << "  " << v << " A-Mac: " << r.forall_mac.reason << "\n";
    out << "  " << v << " EA-ring: " << r.exists_forall_ring.reason << "\n";
    out << "  " << v << " AE-ring: " << r.forall_exists_ring.reason << "\n";
  }
}

inline int cmd_table(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  const auto rows = definability_table(f);
  if (c.json) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& r : rows) jr.push_back(to_json(r));
    out << nlohmann::json{{"verb", "table"}, {"field", f->to_string()}, {"rows", jr}}.dump(2) << "\n";
  } else {
    table_text(out, f, rows);
  }
  return kTrue;
}

inline int cmd_suite(const RunConfig& c, std::ostream& out) {
  SuiteConfig sc;
  sc.seed = c.seed;
  sc.samples = c.samples_or(sc.samples);
  sc.precision = c.precision();
  const auto results = run_suite(sc);
  std::size_t checks = 0, failures = 0, undecided = 0;
  for (const auto& r : results) {
    checks += r.checks;
    failures += r.failures;
    undecided += r.undecided;
  }
  if (c.json) {
    // Timings are left out so equal configurations give equal output.
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& r : results) {
      jr.push_back({{"name", r.name},
                    {"checks", r.checks},
                    {"failures", r.failures},
                    {"undecided", r.undecided},
                    {"notes", r.notes}});
    }
    out << nlohmann::json{{"verb", "suite"},
                          {"seed", sc.seed},
                          {"samples", sc.samples},
                          {"prec", c.prec},
                          {"batteries", jr},
                          {"totals", {{"checks", checks}, {"failures", failures}, {"undecided", undecided}}}}
               .dump(2)
        << "\n";
  } else {
    double seconds = 0;
    for (const auto& r : results) {
      seconds += r.seconds;
      out << std::left << std::setw(28) << r.name << std::right << std::setw(7) << r.checks << " checks "
          << std::setw(5) << r.failures << " failed " << std::setw(5) << r.undecided << " undecided  "
          << std::fixed << std::setprecision(2) << r.seconds << "s\n";
      for (const auto& n : r.notes) out << "    " << n << "\n";
    }
    out << "total: " << checks << " checks, " << failures << " failed, " << undecided << " undecided, "
        << std::fixed << std::setprecision(2) << seconds << "s\n";
  }
  if (failures) return kFalse;
  if (undecided) return kUnknown;
  return kTrue;
}

inline int cmd_group(const RunConfig& c, std::ostream& out) {
  if (c.gamma.empty()) throw Usage("--gamma is required");
  const GroupShape g = GroupShape::parse(c.gamma);
  nlohmann::json convex = nlohmann::json::array();
  for (auto j : convex_subgroups(g)) convex.push_back(j);
  const auto smallest = is_discrete(g);
  nlohmann::json r{{"verb", "group"},
                   {"shape", g.to_string()},
                   {"rank", g.rank()},
                   {"convex_subgroups", convex},
                   {"discrete", smallest.has_value()},
                   {"smallest_positive", smallest ? nlohmann::json(smallest->to_string()) : nlohmann::json(nullptr)},
                   {"p", c.p},
                   {"p_regular", is_p_regular(g, c.p)},
                   {"z_group", is_Z_group(g)},
                   {"regular_quotient", has_regular_quotient(g)}};
  if (!c.x.empty()) {
    const GroupElement e = GroupElement::parse(g, c.x);
    const auto q = divide_by(c.p, e);
    r["element"] = {{"value", e.to_string()},
                    {"sign", e.sign()},
                    {"divided_by_p", q ? nlohmann::json(q->to_string()) : nlohmann::json(nullptr)}};
  }
  detail::emit(out, c, r);
  return kTrue;
}

inline int cmd_power_index(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  nlohmann::json r{{"verb", "power-index"}, {"field", f->to_string()}, {"p", c.p}};
  r["index"] = power_class_index(*f, c.p);
  if (c.level) {
    r["level"] = c.level;
    r["residue_field"] = f->residue_field(c.level)->to_string();
    r["index_via_level"] = power_class_index_valued(*f, c.level, c.p);
  }
  detail::emit(out, c, r);
  return kTrue;
}

inline int cmd_henselian(const RunConfig& c, std::ostream& out) {
  const FieldPtr f = detail::field_of(c);
  const std::size_t level = c.level ? c.level : f->depth();
  const auto rep = p_henselian_check(f, level, c.p, c.samples_or(200), c.seed);
  nlohmann::json r{{"verb", "henselian"},  {"field", f->to_string()},  {"level", level},
                   {"p", c.p},             {"samples", rep.samples}, {"failures", rep.failures},
                   {"undecided", rep.undecided}, {"notes", rep.notes}};
  detail::emit(out, c, r);
  if (rep.failures) return kFalse;
  if (rep.undecided) return kUnknown;
  return kTrue;
}

// --- entry point ---

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"valdef: definable valuation rings, experiments and reports", "valdef"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--prec", cfg.prec, "precision cap per layer")->check(CLI::PositiveNumber);
    sub->add_flag("--json", cfg.json, "JSON output");
  };
  auto setting = [&](CLI::App* sub) {
    sub->add_option("--field", cfg.field, "field descriptor");
    sub->add_option("--p", cfg.p, "the prime p");
    sub->add_option("--case", cfg.case_number, "1 Kummer, 2 Artin-Schreier, 3 quadratic");
    sub->add_option("--level", cfg.level, "valuation level (1 = coarsest)");
  };

  std::vector<std::pair<CLI::App*, std::function<int(const RunConfig&, std::ostream&)>>> verbs;
  auto verb = [&](const char* name, const char* help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    verbs.emplace_back(sub, fn);
    return sub;
  };

  auto* s = verb("solve", "decide f(Y) = x and give a witness", cmd_solve);
  setting(s);
  s->add_option("--x", cfg.x, "right-hand side");

  auto* ra = verb("ra-member", "decide x in R_a", cmd_ra_member);
  setting(ra);
  ra->add_option("--x", cfg.x, "element");
  ra->add_option("--a", cfg.a, "parameter a (default: uniformizer)");

  auto* phz = verb("phi-z", "evaluate the uniform formula for O_v at x", cmd_phi_z);
  setting(phz);
  phz->add_option("--x", cfg.x, "element");

  auto* rob = verb("robinson", "evaluate the square-root formula for Z_p at x", cmd_robinson);
  rob->add_option("--field", cfg.field, "field descriptor (default Qp(p))");
  rob->add_option("--p", cfg.p, "odd prime");
  rob->add_option("--x", cfg.x, "element");

  auto* ev = verb("eval", "evaluate a formula", cmd_eval);
  ev->add_option("--field", cfg.field, "field descriptor");
  ev->add_option("--formula", cfg.formula, "formula text or file");
  ev->add_option("--assign", cfg.assign, "name=element (repeatable)");
  ev->add_option("--pool", cfg.pool, "witness pool element for bounded search (repeatable)");
  ev->add_option("--level", cfg.level, "valuation level");

  auto* ce = verb("counterexample", "build the non-definability certificate", cmd_counterexample);
  ce->add_option("--residue", cfg.residue, "residue base field");
  ce->add_option("--gamma", cfg.gamma, "value group shape");
  ce->add_option("--samples", cfg.samples, "homomorphism and restriction samples");

  auto* tb = verb("table", "definability table of a tower", cmd_table);
  tb->add_option("--field", cfg.field, "field descriptor");

  auto* su = verb("suite", "run every property battery", cmd_suite);
  su->add_option("--samples", cfg.samples, "samples per battery");

  auto* gr = verb("group", "predicates of an ordered group shape", cmd_group);
  gr->add_option("--gamma", cfg.gamma, "shape, e.g. Z*Q");
  gr->add_option("--p", cfg.p, "prime for p-regularity and division");
  gr->add_option("--x", cfg.x, "group element, e.g. (1,-2)");

  auto* pi = verb("power-index", "index of the p-th powers", cmd_power_index);
  pi->add_option("--field", cfg.field, "field descriptor");
  pi->add_option("--p", cfg.p, "the prime p");
  pi->add_option("--level", cfg.level, "also compute through this valuation");

  auto* hs = verb("henselian", "sample 1 + m for p-th roots", cmd_henselian);
  hs->add_option("--field", cfg.field, "field descriptor");
  hs->add_option("--p", cfg.p, "the prime p");
  hs->add_option("--level", cfg.level, "valuation level (default: finest)");
  hs->add_option("--samples", cfg.samples, "sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kTrue;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  for (const auto& [sub, fn] : verbs) {
    if (!sub->parsed()) continue;
    try {
      return fn(cfg, out);
    } catch (const InsufficientPrecision& e) {
      err << "indeterminate: " << e.what() << "\n";
      return kUnknown;
    } catch (const ParseError& e) {
      err << "malformed input: " << e.what() << "\n";
      return kUsage;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const nlohmann::json::exception& e) {
      err << "malformed input: " << e.what() << "\n";
      return kUsage;
    }
  }
  return kUsage;
}

}  // namespace valdef::cli
