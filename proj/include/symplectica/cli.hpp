#pragma once

// Command-line front end and its JSON file formats.
//
// Model file (UTF-8 JSON):
//   {"n": 1, "hbar": 1, "kB": 1, "ordering": "qp-blocks",
//    "hessian": [[...], ...] or a flat row-major array of 4n² numbers,
//    "xi": [...2n...], "h0": 0, "labels": ["mode-1", ...]}
// Covariance file:
//   {"n": 1, "hbar": 1, "ordering": "qp-blocks", "matrix": [[...]], "mean": [...]}
// Matrix file (check-symplectic):
//   {"matrix": [[...]]}

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symplectica/matrix.hpp"

namespace symplectica::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitNotPositiveDefinite = 3,
  kExitCheckFailed = 4,
};

struct ModelFile {
  std::size_t n = 0;
  double hbar = 1.0;
  double kb = 1.0;
  Matrix hessian;
  Vector xi;
  double h0 = 0.0;
  std::vector<std::string> labels;
};

struct CovarianceFile {
  std::size_t n = 0;
  double hbar = 1.0;
  Matrix matrix;
  std::optional<Vector> mean;
};

/// Relative asymmetry above which loading fails, and above which a
/// symmetrization warning is emitted.
inline constexpr double kSymmetryReject = 1e-8;
inline constexpr double kSymmetryWarn = 1e-12;

/// Parse failures throw Error{ErrorCode::Parse}. Warnings go to `warn`.
ModelFile parse_model(const std::string& json_text, std::ostream& warn);
CovarianceFile parse_covariance(const std::string& json_text, std::ostream& warn);
Matrix parse_matrix_file(const std::string& json_text);

std::string read_file(const std::string& path);

/// Serializes a covariance file in the format parse_covariance reads.
std::string covariance_to_json(const CovarianceFile& cov);
std::string matrix_to_json(const Matrix& m);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Runs `symplectica <args...>` (args exclude the program name) and returns
/// the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symplectica::cli
