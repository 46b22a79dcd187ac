#include "ccfrac/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ccfrac::io {

json polynomial_to_json(const Polynomiald& p) {
  json terms = json::array();
  for (const auto& [alpha, c] : p.terms()) terms.push_back({{"alpha", alpha.exponents()}, {"c", c}});
  return {{"terms", terms}};
}

Polynomiald polynomial_from_json(const json& doc, std::size_t n, const std::string& where) {
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array())
    throw ValidationError(where + ": expected an object with a \"terms\" array");
  Polynomiald p(n);
  std::size_t k = 0;
  for (const json& t : doc["terms"]) {
    const std::string at = where + ".terms[" + std::to_string(k++) + "]";
    if (!t.is_object() || !t.contains("alpha") || !t.contains("c"))
      throw ValidationError(at + ": expected {\"alpha\": [...], \"c\": number}");
    const json& a = t["alpha"];
    if (!a.is_array()) throw ValidationError(at + ".alpha: expected an array");
    if (a.size() != n)
      throw ValidationError(at + ".alpha: length " + std::to_string(a.size()) + " differs from n = " + std::to_string(n));
    std::vector<int> exps;
    for (const json& e : a) {
      if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() > 1000)
        throw ValidationError(at + ".alpha: exponents must be integers in [0, 1000]");
      exps.push_back(e.get<int>());
    }
    if (!t["c"].is_number()) throw ValidationError(at + ".c: expected a number");
    const double c = t["c"].get<double>();
    if (!std::isfinite(c)) throw ValidationError(at + ".c: coefficient must be finite");
    p.add_term(MultiIndex(std::move(exps)), c);
  }
  return p;
}

FractionalProgram problem_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("problem: expected a JSON object");
  for (const char* key : {"n", "f", "g", "h"})
    if (!doc.contains(key)) throw ValidationError(std::string("problem: missing key \"") + key + "\"");
  const json& jn = doc["n"];
  if (!jn.is_number_integer() || jn.get<long long>() < 1 || jn.get<long long>() > 64)
    throw ValidationError("n: expected an integer in [1, 64]");
  const auto n = jn.get<std::size_t>();
  if (!doc["h"].is_array()) throw ValidationError("h: expected an array");
  Polynomiald f = polynomial_from_json(doc["f"], n, "f");
  Polynomiald g = polynomial_from_json(doc["g"], n, "g");
  std::vector<Polynomiald> h;
  for (std::size_t i = 0; i < doc["h"].size(); ++i)
    h.push_back(polynomial_from_json(doc["h"][i], n, "h[" + std::to_string(i) + "]"));
  return FractionalProgram(n, std::move(f), std::move(g), std::move(h));
}

json problem_to_json(const FractionalProgram& fp) {
  json h = json::array();
  if (!fp.has_sentinel_constraint())
    for (const Polynomiald& p : fp.h()) h.push_back(polynomial_to_json(p));
  return {{"n", fp.num_vars()}, {"f", polynomial_to_json(fp.f())}, {"g", polynomial_to_json(fp.g())}, {"h", h}};
}

FractionalProgram load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return problem_from_json(doc);
}

void save_problem(const FractionalProgram& fp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << dump(problem_to_json(fp)) << '\n';
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

namespace {

json basis_to_json(const MonomialBasis& b) {
  json a = json::array();
  for (const MultiIndex& m : b) a.push_back(m.exponents());
  return a;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector(m.row(i).transpose()));
  return rows;
}

}  // namespace

json certificate_to_json(const GramCertificate& cert) {
  return {{"basis", basis_to_json(cert.basis)},
          {"size", cert.Q.rows()},
          {"matrix", matrix_rows(cert.Q)},
          {"min_eigenvalue", number(cert.min_eigenvalue)},
          {"coefficient_residual", number(cert.coefficient_residual)},
          {"valid", cert.valid}};
}

json config_to_json(const SolveConfig& c) {
  return {{"psd_tol", c.sos.psd_tol},
          {"gram_tol", c.sos.gram_tol},
          {"gap_tol", c.gap_tol},
          {"weak_duality_tol", c.weak_duality_tol},
          {"attainment_tol", c.attainment_tol},
          {"feas_tol", c.feasibility_tol},
          {"slater_margin", c.slater_margin},
          {"screen_sos_convexity", c.screen_sos_convexity},
          {"grid_oracle", c.grid_oracle},
          {"sdp",
           {{"feasibility_tol", c.sdp.feasibility_tol},
            {"duality_gap_tol", c.sdp.duality_gap_tol},
            {"stop_tol", c.sdp.stop_tol},
            {"infeasibility_tol", c.sdp.infeasibility_tol},
            {"max_iterations", c.sdp.max_iterations}}}};
}

json report_to_json(const SolveReport& r) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["status"] = to_string(r.status);
  doc["value"] = number(r.value);
  doc["value_D"] = number(r.value_D);
  doc["value_Q"] = number(r.value_Q);
  doc["status_D"] = sdp::to_string(r.status_D);
  doc["status_Q"] = sdp::to_string(r.status_Q);
  doc["x_bar"] = r.x_bar ? vector(*r.x_bar) : json(nullptr);
  doc["y0"] = number(r.y0);
  doc["lambda"] = vector(r.lambda);
  doc["gamma"] = number(r.gamma);
  doc["kkt_multipliers"] = vector(r.kkt_multipliers);

  json res = nullptr;
  if (r.verification) {
    const VerificationReport& v = *r.verification;
    json box = json::array();
    for (const auto& [lo, hi] : v.oracle_box) box.push_back({number(lo), number(hi)});
    res = {{"feasibility", number(v.feasibility_residual)},
           {"dinkelbach", number(v.dinkelbach_residual)},
           {"kkt_stationarity", number(v.kkt_stationarity_norm)},
           {"kkt_complementarity", number(v.kkt_complementarity_norm)},
           {"gram", number(v.gram_residual)},
           {"gram_min_eigenvalue", number(v.gram_min_eigenvalue)},
           {"oracle_value", v.oracle_value ? number(*v.oracle_value) : json(nullptr)},
           {"oracle_gap", v.oracle_gap ? number(*v.oracle_gap) : json(nullptr)},
           {"oracle_box", box},
           {"oracle_steps", v.oracle_steps}};
  }
  doc["residuals"] = res;

  json screening = json::array();
  for (const ScreeningEntry& e : r.screening) screening.push_back({{"polynomial", e.name}, {"verdict", to_string(e.verdict)}});
  doc["screening"] = screening;
  doc["slater"] = {{"verdict", to_string(r.slater.verdict)},
                   {"tau", number(r.slater.tau)},
                   {"witness", r.slater.witness ? vector(*r.slater.witness) : json(nullptr)},
                   {"max_constraint", number(r.slater.max_constraint)}};
  doc["boundedness"] = {{"min_g", r.min_g ? number(*r.min_g) : json(nullptr)},
                        {"denominator_unbounded", r.denominator_unbounded}};
  doc["certificates"] = {{"gram", r.certificate ? certificate_to_json(*r.certificate) : json(nullptr)}};
  doc["notes"] = r.notes;
  return doc;
}

int exit_code(const std::string& status) {
  static const std::map<std::string, int> codes = {
      {"Solved", 0},       {"Checked", 0},          {"Evaluated", 0},          {"SolvedValueOnly", 2},
      {"Infeasible", 3},   {"EmptyFeasibleGrid", 3}, {"AssumptionViolated", 4}, {"NumericalTrouble", 5},
      {"Unbounded", 6},
  };
  const auto it = codes.find(status);
  return it == codes.end() ? 1 : it->second;
}

std::string dump(const json& doc) { return doc.dump(2); }

}  // namespace ccfrac::io
