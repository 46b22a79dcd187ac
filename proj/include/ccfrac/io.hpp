#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "ccfrac/cct_solver.hpp"
#include "ccfrac/fractional_program.hpp"

namespace ccfrac::io {

using nlohmann::json;

inline constexpr const char* kReportSchema = "ccfrac-report/1";

/// Unreadable file or malformed JSON.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed JSON that does not describe a valid problem.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"terms": [{"alpha": [...], "c": ...}, ...]} in graded-lex order.
json polynomial_to_json(const Polynomiald& p);
Polynomiald polynomial_from_json(const json& doc, std::size_t n, const std::string& where);

/// Problem documents: {"n", "f", "g", "h"}. Duplicate exponents are summed.
FractionalProgram problem_from_json(const json& doc);
json problem_to_json(const FractionalProgram& fp);

FractionalProgram load_problem(const std::string& path);
void save_problem(const FractionalProgram& fp, const std::string& path);

/// Finite numbers as is, NaN and infinities as null.
json number(double v);
json vector(const Eigen::VectorXd& v);

json report_to_json(const SolveReport& report);
json certificate_to_json(const GramCertificate& cert);
json config_to_json(const SolveConfig& config);

/// Process exit status for a report status string; 1 for unknown strings.
int exit_code(const std::string& status);

/// Serialization used for reports: two-space indent, shortest round-trip numbers.
std::string dump(const json& doc);

}  // namespace ccfrac::io
