#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symplectica/cli.hpp"

namespace symplectica::cli {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(std::string(what) + " must be finite");
  return v;
}

Vector vector_field(const json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(number(e, what));
  return v;
}

// Accepts a list of rows or a flat row-major list. `expected_dim` == 0 means
// infer a square shape.
Matrix matrix_field(const json& j, const char* what, std::size_t expected_dim) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a non-empty array");
  std::size_t dim = expected_dim;
  std::vector<double> data;
  if (j.front().is_array()) {
    if (dim == 0) dim = j.size();
    if (j.size() != dim) {
      parse_fail(std::string(what) + " has " + std::to_string(j.size()) + " rows, expected " +
                 std::to_string(dim));
    }
    for (const auto& row : j) {
      const Vector r = vector_field(row, what);
      if (r.size() != dim) {
        parse_fail(std::string(what) + " row has " + std::to_string(r.size()) +
                   " entries, expected " + std::to_string(dim));
      }
      data.insert(data.end(), r.begin(), r.end());
    }
  } else {
    data = vector_field(j, what);
    if (dim == 0) {
      dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(data.size()))));
    }
    if (data.size() != dim * dim) {
      parse_fail(std::string(what) + " has " + std::to_string(data.size()) +
                 " entries, expected " + std::to_string(dim * dim));
    }
  }
  return Matrix(dim, dim, std::move(data));
}

std::size_t dof_field(const json& doc) {
  if (!doc.contains("n")) parse_fail("missing field \"n\"");
  const json& n = doc["n"];
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    parse_fail("\"n\" must be a positive integer");
  }
  return static_cast<std::size_t>(n.get<long long>());
}

void check_ordering(const json& doc) {
  if (doc.contains("ordering") && doc["ordering"] != "qp-blocks") {
    parse_fail("unsupported ordering; only \"qp-blocks\" is recognized");
  }
}

Matrix checked_symmetric(Matrix m, const char* what, std::ostream& warn) {
  const double defect = symmetry_defect(m);
  if (defect > kSymmetryReject) {
    std::ostringstream os;
    os << what << " is not symmetric (relative defect " << defect << ")";
    parse_fail(os.str());
  }
  if (defect > kSymmetryWarn) {
    warn << "warning: " << what << " symmetrized (relative defect " << defect << ")\n";
  }
  return symmetrized(m);
}

double positive_or(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const double v = number(doc[key], key);
  if (!(v > 0.0)) parse_fail(std::string(key) + " must be positive");
  return v;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return rows;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ModelFile parse_model(const std::string& text, std::ostream& warn) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("model file must be a JSON object");
  check_ordering(doc);
  ModelFile m;
  m.n = dof_field(doc);
  m.hbar = positive_or(doc, "hbar", 1.0);
  m.kb = positive_or(doc, "kB", 1.0);
  if (!doc.contains("hessian")) parse_fail("missing field \"hessian\"");
  m.hessian = checked_symmetric(matrix_field(doc["hessian"], "hessian", 2 * m.n), "hessian", warn);
  if (doc.contains("xi")) {
    m.xi = vector_field(doc["xi"], "xi");
    if (m.xi.size() != 2 * m.n) {
      parse_fail("xi has " + std::to_string(m.xi.size()) + " entries, expected " +
                 std::to_string(2 * m.n));
    }
  } else {
    m.xi.assign(2 * m.n, 0.0);
  }
  m.h0 = doc.contains("h0") ? number(doc["h0"], "h0") : 0.0;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) parse_fail("labels must be an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) parse_fail("labels must be an array of strings");
      m.labels.push_back(l.get<std::string>());
    }
    if (m.labels.size() != m.n) parse_fail("need one label per degree of freedom");
  }
  return m;
}

CovarianceFile parse_covariance(const std::string& text, std::ostream& warn) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("covariance file must be a JSON object");
  check_ordering(doc);
  CovarianceFile c;
  c.n = dof_field(doc);
  c.hbar = positive_or(doc, "hbar", 1.0);
  if (!doc.contains("matrix")) parse_fail("missing field \"matrix\"");
  c.matrix = checked_symmetric(matrix_field(doc["matrix"], "matrix", 2 * c.n), "covariance", warn);
  if (doc.contains("mean")) {
    c.mean = vector_field(doc["mean"], "mean");
    if (c.mean->size() != 2 * c.n) parse_fail("mean has wrong length");
  }
  return c;
}

Matrix parse_matrix_file(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("matrix")) parse_fail("missing field \"matrix\"");
  check_ordering(doc);
  Matrix m = matrix_field(doc["matrix"], "matrix", 0);
  if (m.rows() % 2 != 0) {
    throw Error(ErrorCode::OddDimension, "matrix dimension " + std::to_string(m.rows()) +
                                             " is odd; symplectic matrices are 2n x 2n");
  }
  return m;
}

std::string covariance_to_json(const CovarianceFile& cov) {
  json doc;
  doc["n"] = cov.n;
  doc["hbar"] = cov.hbar;
  doc["ordering"] = "qp-blocks";
  doc["matrix"] = matrix_rows(cov.matrix);
  if (cov.mean) doc["mean"] = *cov.mean;
  return doc.dump(2) + "\n";
}

std::string matrix_to_json(const Matrix& m) {
  json doc;
  doc["ordering"] = "qp-blocks";
  doc["matrix"] = matrix_rows(m);
  return doc.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace symplectica::cli
