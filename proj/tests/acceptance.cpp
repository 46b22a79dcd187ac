// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
// usage: acceptance <ccfrac binary> <source dir>

#include <Eigen/Eigenvalues>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccfrac/cct_solver.hpp"
#include "ccfrac/io.hpp"
#include "instances.hpp"
#include "test_support.hpp"

using namespace ccfrac;
using io::json;

namespace {

std::string g_cli;
std::string g_source;

struct CliRun {
  int exit_code = -1;
  json report;
  double seconds = 0.0;
};

CliRun run_cli(const std::string& args) {
  CliRun out;
  const std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  const auto start = std::chrono::steady_clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::string text;
  std::array<char, 4096> buf{};
  while (std::size_t k = std::fread(buf.data(), 1, buf.size(), pipe)) text.append(buf.data(), k);
  const int status = pclose(pipe);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  out.report = json::parse(text, nullptr, false);
  return out;
}

std::string fixture(const std::string& name) { return "'" + g_source + "/problems/" + name + "'"; }

double num(const json& j) { return j.is_number() ? j.get<double>() : std::nan(""); }

struct Gate {
  int failures = 0;
  void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << title << " | " << detail << std::endl;
    if (!ok) ++failures;
  }
};

std::string fmt(double v, int prec = 10) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Certificates gathered across the run, re-verified in criterion 9.
struct EmittedCertificate {
  std::string origin;
  Polynomiald p;
  GramCertificate cert;
};
std::vector<EmittedCertificate> g_certificates;

void collect(const std::string& origin, const Polynomiald& p, const std::optional<GramCertificate>& c) {
  if (c) g_certificates.push_back({origin, p, *c});
}

Polynomiald sos_part(const FractionalProgram& fp, const SolveReport& r) {
  Polynomiald s = fp.f() + r.gamma * fp.g();
  for (std::size_t i = 0; i < fp.num_constraints(); ++i) s += r.lambda(i) * fp.h()[i];
  return s;
}

// 1
void fp1_end_to_end(Gate& gate) {
  const CliRun run = run_cli("solve " + fixture("fp1.json"));
  const json& r = run.report;
  bool ok = run.exit_code == 0 && r.is_object() && r["status"] == "Solved";
  double value = NAN, x1 = NAN, x2 = NAN;
  if (ok) {
    value = num(r["value"]);
    x1 = num(r["x_bar"][0]);
    x2 = num(r["x_bar"][1]);
    ok = std::abs(value - 2.0 / 3.0) <= 1e-4 && std::abs(x1 - 1.0) <= 1e-3 && std::abs(x2 - 1.0) <= 1e-3 &&
         run.seconds <= 10.0;
  }
  gate.report(1, "FP1 end-to-end", ok,
              "exit=" + std::to_string(run.exit_code) + " value=" + fmt(value) + " x_bar=(" + fmt(x1) + ", " +
                  fmt(x2) + ") time=" + fmt(run.seconds, 3) + "s");
}

// 2, 3 and certificates of FP1
void fp1_library(Gate& gate) {
  const FractionalProgram fp = io::load_problem(g_source + "/problems/fp1.json");
  const SolveReport r = solve_fractional(fp);
  collect("FP1 (D)", sos_part(fp, r), r.certificate);

  const MomentProgram q = assemble_Q(fp);
  double y00 = NAN, y10 = NAN, y01 = NAN;
  bool ok = r.status == SolveOutcome::Solved && r.moments.size() == 45;
  if (ok) {
    y00 = r.moments(*q.moments.index_of(MultiIndex({0, 0})));
    y10 = r.moments(*q.moments.index_of(MultiIndex({1, 0})));
    y01 = r.moments(*q.moments.index_of(MultiIndex({0, 1})));
    for (double y : {y00, y10, y01}) ok = ok && std::abs(y - 1.0 / 6.0) <= 2e-3;
  }
  gate.report(2, "FP1 moments", ok, "y00=" + fmt(y00) + " y10=" + fmt(y10) + " y01=" + fmt(y01));

  const double s = 1.0 / 6.0;
  const KktResidual k =
      kkt_residual_pcct(fp, {Eigen::Vector2d(s, s), s}, Eigen::Vector4d(0.0, 37.0 / 3.0, 13.0 / 3.0, 4.0));
  gate.report(3, "FP1 KKT", k.stationarity <= 1e-7 && k.complementarity <= 1e-7,
              "stationarity=" + fmt(k.stationarity, 3) + " complementarity=" + fmt(k.complementarity, 3));
}

// 4
void fp0_non_attainment(Gate& gate) {
  const CliRun run = run_cli("solve " + fixture("fp0.json"));
  const json& r = run.report;
  bool ok = r.is_object() && run.exit_code == 2 && r["status"] == "SolvedValueOnly";
  double value = NAN, y0 = NAN;
  bool unbounded = false;
  if (r.is_object()) {
    value = num(r["value"]);
    y0 = num(r["y0"]);
    unbounded = r["boundedness"]["denominator_unbounded"] == true;
  }
  ok = ok && std::abs(value) <= 1e-5 && y0 < 1e-6 && r["x_bar"].is_null() && unbounded;

  const FractionalProgram fp = io::load_problem(g_source + "/problems/fp0.json");
  const SolveReport lib = solve_fractional(fp);
  collect("FP0 (D)", sos_part(fp, lib), lib.certificate);

  gate.report(4, "FP0 non-attainment", ok,
              "exit=" + std::to_string(run.exit_code) + " status=" + (r.is_object() ? r["status"].dump() : "?") +
                  " value=" + fmt(value, 3) + " y0=" + fmt(y0, 3) + " sup(-g)=" + (unbounded ? "+inf" : "finite"));
}

// 5
void dimensions(Gate& gate) {
  const MomentProgram q = assemble_Q(io::load_problem(g_source + "/problems/fp1.json"));
  std::size_t inequalities = 0;
  for (const auto& c : q.program.constraints()) inequalities += c.relation == sdp::Relation::LessEqual ? 1 : 0;
  const bool dims = q.y.size() == 45 && q.program.block_sizes().size() == 1 && q.program.block_sizes()[0] == 15 &&
                    q.half.size() == 15;
  gate.report(5, "Dimensions", dims,
              "moment variables=" + std::to_string(q.y.size()) + " moment block=" +
                  std::to_string(q.program.block_sizes().empty() ? 0 : q.program.block_sizes()[0]) + "x" +
                  std::to_string(q.program.block_sizes().empty() ? 0 : q.program.block_sizes()[0]) +
                  " linear inequalities=" + std::to_string(inequalities));
}

// 6
void classifier(Gate& gate) {
  const FractionalProgram fp = test::fp1();
  std::vector<std::pair<std::string, Polynomiald>> convex = {
      {"f1", fp.f()}, {"g1", fp.g()}, {"h1", fp.h()[0]}, {"h2", fp.h()[1]}, {"h3", fp.h()[2]}};
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 1 + k % 3;
    const std::size_t rank = k % 4 == 3 ? std::max<std::size_t>(1, n - 1) : n;
    Eigen::MatrixXd L(n, rank);
    for (Eigen::Index i = 0; i < L.size(); ++i) L.data()[i] = u(rng);
    const Eigen::MatrixXd A = L * L.transpose();
    Polynomiald q = Polynomiald::constant(n, u(rng));
    for (std::size_t i = 0; i < n; ++i) {
      q += u(rng) * Polynomiald::variable(n, i);
      for (std::size_t j = 0; j < n; ++j) q += A(i, j) * Polynomiald::variable(n, i) * Polynomiald::variable(n, j);
    }
    convex.emplace_back("quadratic" + std::to_string(k + 1), q);
  }
  const std::vector<std::pair<std::string, Polynomiald>> nonconvex = {
      {"(x1 x2 - 1)^2 + x1^2", test::poly(2, {{{2, 2}, 1}, {{1, 1}, -2}, {{0, 0}, 1}, {{2, 0}, 1}})},
      {"Motzkin", test::poly(2, {{{4, 2}, 1}, {{2, 4}, 1}, {{2, 2}, -3}, {{0, 0}, 1}})}};

  int wrong = 0, certified = 0, refuted = 0;
  std::string misses;
  for (const auto& [name, p] : convex) {
    const SosResult r = is_sos_convex(p);
    if (r.verdict == SosVerdict::Certified) {
      ++certified;
      collect("SOS-convexity of " + name, hessian_form(p), r.certificate);
    } else {
      ++wrong;
      misses += " " + name + "=" + to_string(r.verdict);
    }
  }
  for (const auto& [name, p] : nonconvex) {
    const SosResult r = is_sos_convex(p);
    if (r.verdict == SosVerdict::Refuted) {
      ++refuted;
    } else {
      ++wrong;
      misses += " " + name + "=" + to_string(r.verdict);
    }
  }
  gate.report(6, "SOS-convexity classifier", wrong == 0,
              "certified " + std::to_string(certified) + "/25, refuted " + std::to_string(refuted) +
                  "/2, misclassified " + std::to_string(wrong) + misses);
}

// 7
struct OracleCheck {
  double value = NAN;
  double slack = NAN;
};

// Brute-force minimum of f/(-g) over the grid together with C * spacing,
// C = sqrt(n) * max |grad (f/(-g))| over the feasible grid points.
OracleCheck oracle_with_slack(const FractionalProgram& fp, const std::vector<std::pair<double, double>>& box,
                              int steps) {
  const std::size_t n = fp.num_vars();
  const auto gf = gradient(fp.f());
  const auto gg = gradient(fp.g());
  OracleCheck out;
  out.value = std::numeric_limits<double>::infinity();
  double lip = 0.0, spacing = 0.0;
  for (const auto& [lo, hi] : box) spacing = std::max(spacing, (hi - lo) / (steps - 1));
  std::vector<int> idx(n, 0);
  Eigen::VectorXd x(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) x(i) = box[i].first + (box[i].second - box[i].first) * idx[i] / (steps - 1.0);
    const double g = fp.g().evaluate(x);
    bool feasible = g < 0.0;
    for (const Polynomiald& h : fp.h()) feasible = feasible && h.evaluate(x) <= 0.0;
    if (feasible) {
      const double f = fp.f().evaluate(x);
      out.value = std::min(out.value, f / -g);
      const std::span<const double> xs(x.data(), n);
      const Eigen::VectorXd grad = (evaluate(gf, xs) * -g + f * evaluate(gg, xs)) / (g * g);
      lip = std::max(lip, grad.norm());
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == steps) idx[k++] = 0;
    if (k == n) break;
  }
  out.slack = std::sqrt(static_cast<double>(n)) * lip * spacing;
  return out;
}

void property_suite(Gate& gate) {
  std::mt19937 rng(777);
  int solved = 0, failed = 0, oracle_checked = 0;
  double worst_gap = 0.0, worst_dk = 0.0, worst_feas = 0.0, worst_den = 0.0, worst_oracle = 0.0;
  std::string failures;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + k % 3;
    const int degree = 2 + 2 * ((k / 3) % 3);
    const test::GeneratedInstance inst = test::generate_instance(rng, n, degree);
    const FractionalProgram& fp = inst.fp;
    const SolveReport r = solve_fractional(fp);
    if (r.status != SolveOutcome::Solved) {
      failures += " #" + std::to_string(k) + ":" + to_string(r.status);
      continue;
    }
    ++solved;
    collect("instance " + std::to_string(k) + " (D)", sos_part(fp, r), r.certificate);
    const Eigen::VectorXd& x = *r.x_bar;
    const double gx = fp.g().evaluate(x);
    double feas = 0.0;
    for (const Polynomiald& h : fp.h()) feas = std::max(feas, h.evaluate(x));
    const double dk = std::abs(fp.f().evaluate(x) + r.value * gx);
    const double den = 1.0 / -gx - r.y0;
    bool ok = r.value_D <= r.value_Q + 1e-6;
    ok = ok && std::abs(r.value_D - r.value_Q) <= 1e-5;
    ok = ok && feas <= 1e-6;
    ok = ok && dk <= 1e-5 * (1.0 + std::abs(r.value));
    ok = ok && den <= 1e-6;
    worst_gap = std::max(worst_gap, std::abs(r.value_D - r.value_Q));
    worst_feas = std::max(worst_feas, feas);
    worst_dk = std::max(worst_dk, dk / (1.0 + std::abs(r.value)));
    worst_den = std::max(worst_den, den);
    if (n <= 2) {
      const OracleCheck oc = oracle_with_slack(fp, default_oracle_box(n, x), default_oracle_steps(n));
      ++oracle_checked;
      ok = ok && oc.value >= r.value - 1e-6 && oc.value - r.value <= oc.slack;
      worst_oracle = std::max(worst_oracle, (oc.value - r.value) / oc.slack);
    }
    if (!ok) {
      ++failed;
      failures += " #" + std::to_string(k);
    }
  }
  const bool ok = failed == 0 && solved >= 45;
  gate.report(7, "Property suite", ok,
              "solved " + std::to_string(solved) + "/50, failing " + std::to_string(failed) +
                  ", oracle-checked " + std::to_string(oracle_checked) + ", max |D-Q|=" + fmt(worst_gap, 2) +
                  " max feas=" + fmt(worst_feas, 2) + " max dinkelbach=" + fmt(worst_dk, 2) +
                  " max (1/-g - y0)=" + fmt(worst_den, 2) + " max oracle/slack=" + fmt(worst_oracle, 2) + failures);
}

// 8
void calculus(Gate& gate) {
  std::mt19937 rng(8);
  double worst_g = 0.0, worst_h = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 3;
    const int deg = 1 + k % 8;
    const Polynomiald p = test::random_polynomial(rng, n, deg);
    const auto grad = gradient(p);
    const auto hess = hessian(p);
    for (int j = 0; j < 10; ++j) {
      const std::vector<double> x = test::random_point(rng, n, 1.5);
      const Eigen::VectorXd g = evaluate(grad, std::span<const double>(x));
      const Eigen::MatrixXd H = evaluate(hess, std::span<const double>(x));
      const Eigen::VectorXd fg = test::fd_gradient(p, x, 1e-5);
      const Eigen::MatrixXd fh = test::fd_hessian(p, x, 1e-5);
      worst_g = std::max(worst_g, (g - fg).cwiseAbs().maxCoeff() / std::max(1.0, fg.cwiseAbs().maxCoeff()));
      worst_h = std::max(worst_h, (H - fh).cwiseAbs().maxCoeff() / std::max(1.0, fh.cwiseAbs().maxCoeff()));
    }
  }
  gate.report(8, "Calculus checks", worst_g <= 1e-6 && worst_h <= 1e-6,
              "100 polynomials x 10 points, max rel err gradient=" + fmt(worst_g, 2) + " hessian=" + fmt(worst_h, 2));
}

// 9
void certificate_integrity(Gate& gate) {
  double worst_res = 0.0, worst_eig = std::numeric_limits<double>::infinity();
  int bad = 0;
  std::string which;
  for (const EmittedCertificate& e : g_certificates) {
    std::map<std::vector<int>, double> coeff;
    const MonomialBasis& b = e.cert.basis;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        std::vector<int> a(b[i].exponents());
        for (std::size_t v = 0; v < a.size(); ++v) a[v] += b[j][v];
        coeff[a] += e.cert.Q(i, j);
      }
    for (const auto& [alpha, c] : e.p.terms()) coeff[alpha.exponents()] -= c;
    double res = 0.0;
    for (const auto& [alpha, c] : coeff) res = std::max(res, std::abs(c));
    const Eigen::MatrixXd sym = 0.5 * (e.cert.Q + e.cert.Q.transpose());
    const double eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
    const double asym = (e.cert.Q - e.cert.Q.transpose()).cwiseAbs().maxCoeff();
    worst_res = std::max(worst_res, res);
    worst_eig = std::min(worst_eig, eig);
    if (res > 1e-7 || eig < -1e-8 || asym > 1e-12) {
      ++bad;
      which += " " + e.origin;
    }
  }
  const bool ok = bad == 0 && !g_certificates.empty();
  gate.report(9, "Certificate integrity", ok,
              std::to_string(g_certificates.size()) + " certificates, max residual=" + fmt(worst_res, 2) +
                  " min eigenvalue=" + fmt(worst_eig, 2) + (bad ? ", rejected:" + which : ""));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <ccfrac binary> <source dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_source = argv[2];

  Gate gate;
  fp1_end_to_end(gate);
  fp1_library(gate);
  fp0_non_attainment(gate);
  dimensions(gate);
  classifier(gate);
  property_suite(gate);
  calculus(gate);
  certificate_integrity(gate);
  std::cout << (gate.failures == 0 ? "ALL CRITERIA PASS" : std::to_string(gate.failures) + " CRITERIA FAIL")
            << std::endl;
  return gate.failures == 0 ? 0 : 1;
}
