// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or invalid input.

#include "jetbig/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace jetbig;

namespace {

constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<long> parse_weights(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rational r = Rational::parse(item);
    if (!r.is_integer()) throw usage_error("weights must be integers: " + text);
    out.push_back(r.to_long());
  }
  if (out.empty()) throw usage_error("empty weight list");
  return out;
}

RegionMode parse_mode(const std::string& m) { return m == "exact" ? RegionMode::Exact : RegionMode::Relaxed; }
Method parse_method(const std::string& m) { return m == "fit" ? Method::Fit : Method::Integration; }

std::optional<Rational> parse_degree(const std::string& d) {
  if (d.empty() || d == "d") return std::nullopt;
  Rational r = Rational::parse(d);
  if (!r.is_integer() || r < Rational(5)) throw usage_error("degree must be an integer >= 5 (or 'd')");
  return r;
}

void emit(const std::string& body, const std::string& path) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << body;
}

int cmd_chern(long d) {
  auto cn = chern_numbers_surface(d);
  std::cout << "c1sq=" << cn.c1sq << "\n"
            << "c2=" << cn.c2 << "\n"
            << "noether=" << (cn.noether_integral() ? "integral" : "FAILS") << "\n";
  return 0;
}

int cmd_chi(int tower, const std::string& weights, const std::string& c, const std::string& method) {
  const char* power = tower == 3 ? "n^5" : "n^6";
  long period = 1;
  Method m = parse_method(method);
  LeadingForm f;
  if (!c.empty()) {
    if (tower != 3) throw usage_error("--c applies to --tower 3 only");
    if (c == "c") {
      f = chi3_leading_symbolic(m);
    } else {
      Rational cv = Rational::parse(c);
      if (cv < Rational(3)) throw usage_error("--c must be >= 3");
      f = chi3_leading(cv, m, &period);
    }
  } else {
    f = chi_leading_weights(tower, parse_weights(weights), m, &period);
  }
  std::cout << power << " * (" << f.str() << ")\n";
  std::cout << "method=" << to_string(m) << "\n";
  if (m == Method::Fit) std::cout << "period=" << period << "\n";
  return 0;
}

int cmd_threshold(int tower, bool optimize_c, long d_max) {
  if (optimize_c) {
    if (tower != 3) throw usage_error("--optimize-c applies to --tower 3 only");
    auto ot = threshold_optimize_c(5, d_max);
    if (!ot.threshold) {
      std::cout << "threshold=none\n";
      return 0;
    }
    const Rational& c = ot.witness.at(*ot.threshold);
    std::cout << "threshold=" << *ot.threshold << "\n";
    std::cout << "witness_c=" << c << "\n";
    Rational y = h0_bound_3(Rational(*ot.threshold), c, c == Rational(3) ? RegionMode::Relaxed : RegionMode::Exact)
                     .eval({{"d", Rational(*ot.threshold)}});
    std::cout << "witness_h0=" << y << "\n";
    return 0;
  }
  RationalPoly f = tower == 3 ? h0_bound_3(std::nullopt, 3, RegionMode::Relaxed) : h0_bound_4(std::nullopt, RegionMode::Relaxed);
  auto t = threshold_find([&](long d) { return f.eval({{"d", Rational(d)}}); }, 5, d_max);
  std::cout << "bound=" << f.str() << "\n";
  std::cout << "threshold=" << (t ? std::to_string(*t) : "none") << "\n";
  return 0;
}

int cmd_report(int tower, const std::string& degree, const std::string& c, const std::string& mode,
               const std::string& lbound, const std::string& format, const std::string& out) {
  auto d = parse_degree(degree);
  RegionMode m = parse_mode(mode);
  if (m == RegionMode::Exact && !d) throw usage_error("the exact region needs --degree");
  BigReport r;
  if (tower == 3) {
    Rational cv = Rational::parse(c);
    if (cv < Rational(3)) throw usage_error("--c must be >= 3");
    r = report_x3(d, cv, m, lbound == "3n-3k" ? CurveLBound::Literal : CurveLBound::FamilyBound);
  } else {
    if (c != "3") throw usage_error("--c applies to --tower 3 only");
    r = report_x4(d, m);
  }
  if (!d && r.h0_leading.degree_over({"d"}) > 0)
    r.threshold = threshold_find([&](long dd) { return r.h0_leading.eval({{"d", Rational(dd)}}); });
  emit(format == "machine" ? r.machine() : r.text(), out);
  return 0;
}

int cmd_verify(const std::vector<std::string>& only, bool thorough, const std::string& inject, const std::string& format) {
  VerifyOptions opt;
  auto groups = verify_groups();
  for (const auto& g : only) {
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) throw usage_error("unknown group: " + g);
    opt.only.insert(g);
  }
  opt.thorough = thorough;
  opt.inject_wrong = inject;
  auto res = verify_constants(opt);
  std::cout << (format == "machine" ? res.machine() : res.text());
  return res.all_pass() ? 0 : kVerifyFailed;
}

int cmd_ycurve(const std::string& from, const std::string& to, const std::string& step, const std::string& out) {
  Rational a = Rational::parse(from), b = Rational::parse(to), s = Rational::parse(step);
  if (a < Rational(4) || b > Rational(7) || !(a < b)) throw usage_error("need 4 <= from < to <= 7");
  if (s.sign() <= 0) throw usage_error("step must be positive");
  RationalPoly y = h0_bound_3_symbolic_c(11);
  std::ostringstream csv;
  csv << "c,y,y_decimal\n";
  for (const auto& row : y_grid(y, a, b, s)) csv << row.c << "," << row.y.fraction_str() << "," << row.y.decimal(8) << "\n";
  emit(csv.str(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leading-order Riemann-Roch bounds on Demailly-Semple towers of surfaces in P^3"};
  app.require_subcommand(1);
  std::string format;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "machine", "csv"}));

  long degree = 0;
  auto* chern = app.add_subcommand("chern", "Chern numbers of a smooth degree-d surface");
  chern->add_option("--degree", degree, "surface degree")->required();

  int tower = 3;
  std::string weights = "2,1", c, method = "integration";
  auto* chi = app.add_subcommand("chi", "leading chi of O_L(w n) on X_3 or X_4");
  chi->add_option("--tower", tower)->check(CLI::IsMember({3, 4}));
  chi->add_option("--weights", weights, "comma separated, right-aligned to the top level");
  chi->add_option("--c", c, "X_3 family O_3((c-1)n, n); 'c' for the symbolic quartics");
  chi->add_option("--method", method)->check(CLI::IsMember({"integration", "fit"}));

  bool optimize_c = false;
  long d_max = 60;
  auto* thr = app.add_subcommand("threshold", "least degree from which the bound stays positive");
  thr->add_option("--tower", tower)->check(CLI::IsMember({3, 4}));
  thr->add_flag("--optimize-c", optimize_c, "let c range over (4, 7) in steps of 1/20");
  thr->add_option("--d-max", d_max)->check(CLI::Range(5L, 400L));

  std::string rdeg, rc = "3", mode = "relaxed", lbound = "cn-3k", out;
  auto* rep = app.add_subcommand("report", "full h^0 bound with its pieces");
  rep->add_option("--tower", tower)->check(CLI::IsMember({3, 4}));
  rep->add_option("--degree", rdeg, "integer >= 5, or 'd' for symbolic (relaxed mode)");
  rep->add_option("--c", rc);
  rep->add_option("--mode", mode)->check(CLI::IsMember({"exact", "relaxed"}));
  rep->add_option("--l-bound", lbound)->check(CLI::IsMember({"cn-3k", "3n-3k"}));
  rep->add_option("-o,--output", out);

  std::vector<std::string> only;
  bool thorough = false;
  std::string inject;
  auto* ver = app.add_subcommand("verify", "recompute the reference constants");
  ver->add_flag("--paper-constants", "accepted for compatibility; all constants are always checked");
  ver->add_option("--only", only, "groups")->delimiter(',');
  ver->add_flag("--thorough", thorough, "also fit the large regions by sampling");
  ver->add_option("--inject-wrong", inject, "perturb one reference value (self-test)");

  std::string from = "4", to = "7", step = "1/20";
  auto* yc = app.add_subcommand("ycurve", "y(c) grid for d = 11 as CSV");
  yc->add_option("--from", from);
  yc->add_option("--to", to);
  yc->add_option("--step", step);
  yc->add_option("--emit", format)->check(CLI::IsMember({"csv"}));
  yc->add_option("-o,--output", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (format == "csv" && !yc->parsed()) throw usage_error("csv output is only available for ycurve");
    if (format == "machine" && (yc->parsed() || chern->parsed() || chi->parsed() || thr->parsed()))
      throw usage_error("machine output is available for report and verify");
    if (chern->parsed()) return cmd_chern(degree);
    if (chi->parsed()) return cmd_chi(tower, weights, c, method);
    if (thr->parsed()) return cmd_threshold(tower, optimize_c, d_max);
    if (rep->parsed()) return cmd_report(tower, rdeg, rc, mode, lbound, format, out);
    if (ver->parsed()) return cmd_verify(only, thorough, inject, format);
    if (yc->parsed()) return cmd_ycurve(from, to, step, out);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
