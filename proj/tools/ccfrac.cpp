// ccfrac: command-line front end for polynomial fractional programs.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccfrac/cct_solver.hpp"
#include "ccfrac/io.hpp"

using namespace ccfrac;
using io::json;

namespace {

constexpr int kUsage = 64;
constexpr int kParse = 65;
constexpr int kValidation = 66;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem;
  std::string out;
  std::string dump_sdp;
  std::string point;
  std::string multipliers;
  std::string box;
  std::optional<int> steps;
  SolveConfig config;
};

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
    if (used != item.size()) throw UsageError(flag + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<std::pair<double, double>> parse_box(const std::string& text, std::size_t n) {
  std::vector<std::pair<double, double>> box;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--box: expected lo:hi intervals, got '" + item + "'");
    const auto lo = parse_numbers(item.substr(0, colon), "--box");
    const auto hi = parse_numbers(item.substr(colon + 1), "--box");
    if (lo.size() != 1 || hi.size() != 1) throw UsageError("--box: expected lo:hi intervals, got '" + item + "'");
    box.emplace_back(lo[0], hi[0]);
  }
  if (box.size() == 1 && n > 1) box.resize(n, box[0]);
  if (box.size() != n) throw UsageError("--box: need 1 or n = " + std::to_string(n) + " intervals");
  return box;
}

json problem_summary(const FractionalProgram& fp) {
  return {{"n", fp.num_vars()},
          {"m", fp.num_constraints()},
          {"d", fp.order()},
          {"max_degree", fp.max_degree()},
          {"sentinel_constraint", fp.has_sentinel_constraint()}};
}

json run_check(const FractionalProgram& fp, const Options& o) {
  json results = json::array();
  auto check = [&](const std::string& name, const Polynomiald& p) {
    const SosResult r = is_sos_convex(p, o.config.sos);
    results.push_back({{"polynomial", name},
                       {"verdict", to_string(r.verdict)},
                       {"margin", io::number(r.margin)},
                       {"detail", r.detail}});
  };
  check("f", fp.f());
  check("g", fp.g());
  if (!fp.has_sentinel_constraint())
    for (std::size_t i = 0; i < fp.num_constraints(); ++i) check("h" + std::to_string(i + 1), fp.h()[i]);
  return {{"schema", io::kReportSchema}, {"status", "Checked"}, {"results", results}};
}

json run_solve(const FractionalProgram& fp, const Options& o, bool certify) {
  if (!o.dump_sdp.empty()) {
    std::ofstream out(o.dump_sdp);
    if (!out) throw UsageError("--dump-sdp: cannot write " + o.dump_sdp);
    sdp::write_sdpa(assemble_Q(fp).program, out);
  }
  json doc;
  try {
    const SolveReport r = solve_fractional(fp, o.config);
    doc = io::report_to_json(r);
    if (certify) {
      const MonomialBasis moments = monomial_basis(fp.num_vars(), 2 * fp.order());
      json basis = json::array();
      for (const MultiIndex& a : moments) basis.push_back(a.exponents());
      doc["certificates"]["moments"] =
          r.moments.size() ? json{{"basis", basis}, {"values", io::vector(r.moments)}} : json(nullptr);
    }
  } catch (const std::exception& e) {
    doc = io::report_to_json(SolveReport{});
    doc["notes"].push_back(std::string("solver failure: ") + e.what());
  }
  return doc;
}

json run_kkt(const FractionalProgram& fp, const Options& o) {
  if (o.point.empty() || o.multipliers.empty()) throw UsageError("kkt: --point and --multipliers are required");
  const auto pt = parse_numbers(o.point, "--point");
  const auto mu = parse_numbers(o.multipliers, "--multipliers");
  const std::size_t n = fp.num_vars(), m = fp.num_constraints();
  if (pt.size() != n + 1) throw UsageError("--point: expected n + 1 = " + std::to_string(n + 1) + " values (s, t)");
  if (mu.size() != m + 1) throw UsageError("--multipliers: expected m + 1 = " + std::to_string(m + 1) + " values");
  if (!(pt.back() > 0.0)) throw UsageError("--point: t must be positive");
  CctPoint p{Eigen::Map<const Eigen::VectorXd>(pt.data(), n), pt.back()};
  const Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(mu.data(), m + 1);
  const KktResidual r = kkt_residual_pcct(fp, p, lam);
  json cons = json::array();
  for (const auto& c : pcct_constraints(fp, p)) cons.push_back(io::number(c.first));
  return {{"schema", io::kReportSchema},
          {"status", "Evaluated"},
          {"point", {{"s", io::vector(p.s)}, {"t", p.t}}},
          {"x", io::vector(p.x())},
          {"multipliers", io::vector(lam)},
          {"constraint_values", cons},
          {"residuals",
           {{"kkt_stationarity", io::number(r.stationarity)}, {"kkt_complementarity", io::number(r.complementarity)}}}};
}

json run_oracle(const FractionalProgram& fp, const Options& o) {
  const std::size_t n = fp.num_vars();
  if (n > 3) throw UsageError("oracle: at most 3 variables");
  const auto box = o.box.empty() ? default_oracle_box(n, std::nullopt) : parse_box(o.box, n);
  const int steps = o.steps.value_or(default_oracle_steps(n));
  if (steps < 2) throw UsageError("--steps: need at least 2");
  json jbox = json::array();
  for (const auto& [lo, hi] : box) jbox.push_back({lo, hi});
  json doc = {{"schema", io::kReportSchema}, {"box", jbox}, {"steps", steps}};
  try {
    const GridResult g = grid_oracle(fp, box, steps);
    doc["status"] = "Evaluated";
    doc["value"] = io::number(g.value);
    doc["argmin"] = io::vector(g.argmin);
    doc["feasible_count"] = g.feasible_count;
  } catch (const EmptyFeasibleGrid& e) {
    doc["status"] = "EmptyFeasibleGrid";
    doc["value"] = nullptr;
    doc["argmin"] = nullptr;
    doc["feasible_count"] = 0;
  }
  return doc;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("problem", o.problem, "problem file (JSON)")->required();
  sub->add_option("--out", o.out, "write the report here instead of stdout");
  sub->add_option("--psd-tol", o.config.sos.psd_tol, "eigenvalue tolerance for Gram matrices")->capture_default_str();
  sub->add_option("--gap-tol", o.config.gap_tol, "allowed |value(D) - value(Q)|")->capture_default_str();
  sub->add_option("--attainment-tol", o.config.attainment_tol, "y0 threshold for extraction")->capture_default_str();
  sub->add_option("--feas-tol", o.config.feasibility_tol, "allowed constraint violation at x_bar")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solve polynomial fractional programs through SOS/moment relaxations."};
  app.name("ccfrac");
  app.require_subcommand(1);
  Options o;

  CLI::App* check = app.add_subcommand("check", "SOS-convexity of f, g and every h_i");
  CLI::App* solve = app.add_subcommand("solve", "full solve with verification");
  CLI::App* certify = app.add_subcommand("certify", "solve and emit the Gram certificate and moments");
  CLI::App* kkt = app.add_subcommand("kkt", "KKT residuals of the transformed problem at a point");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force grid minimum of the ratio");
  for (CLI::App* sub : {check, solve, certify, kkt, oracle}) add_common(sub, o);
  for (CLI::App* sub : {solve, certify}) sub->add_option("--dump-sdp", o.dump_sdp, "write the moment SDP (SDPA sparse)");
  kkt->add_option("--point", o.point, "s_1,...,s_n,t");
  kkt->add_option("--multipliers", o.multipliers, "mu_1,...,mu_m,mu_{m+1}");
  oracle->add_option("--box", o.box, "lo:hi[,lo:hi...] (one interval applies to every variable)");
  oracle->add_option("--steps", o.steps, "grid points per dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  FractionalProgram fp(1, Polynomiald(1), Polynomiald(1), {});
  try {
    fp = io::load_problem(o.problem);
  } catch (const io::ParseError& e) {
    std::cerr << "ccfrac: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const io::ValidationError& e) {
    std::cerr << "ccfrac: invalid problem: " << e.what() << '\n';
    return kValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  json doc;
  std::string command;
  try {
    if (check->parsed()) {
      command = "check";
      doc = run_check(fp, o);
    } else if (solve->parsed() || certify->parsed()) {
      command = certify->parsed() ? "certify" : "solve";
      doc = run_solve(fp, o, certify->parsed());
    } else if (kkt->parsed()) {
      command = "kkt";
      doc = run_kkt(fp, o);
    } else {
      command = "oracle";
      doc = run_oracle(fp, o);
    }
  } catch (const UsageError& e) {
    std::cerr << "ccfrac: " << e.what() << '\n';
    return kUsage;
  }
  doc["command"] = command;
  doc["problem"] = problem_summary(fp);
  doc["config_echo"] = io::config_to_json(o.config);
  doc["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};

  const std::string text = io::dump(doc) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.out);
    if (!out) {
      std::cerr << "ccfrac: cannot write " << o.out << '\n';
      return kUsage;
    }
    out << text;
  }
  return io::exit_code(doc["status"].get<std::string>());
}
