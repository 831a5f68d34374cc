#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "symplectica/cli.hpp"
#include "symplectica/dynamics.hpp"
#include "symplectica/statmech.hpp"
#include "symplectica/uncertainty.hpp"

namespace symplectica::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultTol = 1e-8;

struct CommonOptions {
  double tol = kDefaultTol;
  double pd_tol = 1e-12;
  std::string output = "json";
};

json rows_of(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return rows;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

void emit_csv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::optional<double>>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (row[i]) out << format_double(*row[i]);
    }
    out << "\n";
  }
}

void emit_table(std::ostream& out, const std::string& format, json head,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::optional<double>>>& rows) {
  if (format == "csv") {
    emit_csv(out, columns, rows);
    return;
  }
  head["columns"] = columns;
  json jrows = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& v : row) r.push_back(optional_number(v));
    jrows.push_back(std::move(r));
  }
  head["rows"] = std::move(jrows);
  emit_json(out, head);
}

SymplecticTolerances symplectic_tolerances(const CommonOptions& o) {
  SymplecticTolerances t;
  t.verification = o.tol;
  t.kernel.positivity = o.pd_tol;
  return t;
}

DynamicsTolerances dynamics_tolerances(const CommonOptions& o) {
  DynamicsTolerances t;
  t.symplectic = symplectic_tolerances(o);
  return t;
}

ModelFile load_model(const std::string& path, std::ostream& err) {
  return parse_model(read_file(path), err);
}

QuadraticHamiltonian to_hamiltonian(const ModelFile& m) {
  return QuadraticHamiltonian(m.hessian, m.xi, m.h0);
}

std::vector<std::string> phase_space_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= n; ++k) names.push_back("q" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) names.push_back("p" + std::to_string(k));
  return names;
}

int cmd_williamson(const std::string& path, const CommonOptions& o, std::ostream& out,
                   std::ostream& err) {
  const ModelFile model = load_model(path, err);
  const auto tol = symplectic_tolerances(o);
  const WilliamsonResult w = williamson(model.hessian, tol);
  if (o.output == "csv") {
    std::vector<std::vector<std::optional<double>>> rows;
    for (std::size_t k = 0; k < w.dof(); ++k) {
      rows.push_back({static_cast<double>(k + 1), w.spectrum[k]});
    }
    emit_csv(out, {"mode", "mu"}, rows);
    return kExitOk;
  }
  json doc;
  doc["command"] = "williamson";
  doc["n"] = model.n;
  doc["ordering"] = "qp-blocks";
  doc["spectrum"] = w.spectrum;
  doc["euclidean_spectrum"] = sym_eigenvalues(model.hessian, tol.kernel);
  doc["S"] = rows_of(w.s);
  doc["residuals"] = {{"symplectic", w.symplectic_residual}, {"diagonal", w.diagonal_residual}};
  emit_json(out, doc);
  return kExitOk;
}

int cmd_modes(const std::string& path, const CommonOptions& o, std::ostream& out,
              std::ostream& err) {
  const ModelFile model = load_model(path, err);
  const QuadraticHamiltonian qh = to_hamiltonian(model);
  const NormalModeFrame f = normal_mode_frame(qh, dynamics_tolerances(o));
  if (o.output == "csv") {
    std::vector<std::vector<std::optional<double>>> rows;
    for (std::size_t k = 0; k < f.dof(); ++k) {
      rows.push_back({static_cast<double>(k + 1), f.spectrum[k]});
    }
    emit_csv(out, {"mode", "frequency"}, rows);
    return kExitOk;
  }
  json doc;
  doc["command"] = "modes";
  doc["n"] = model.n;
  doc["ordering"] = "qp-blocks";
  doc["frequencies"] = f.spectrum;
  doc["x_star"] = f.x_star;
  doc["x_star_prime"] = f.x_star_prime;
  doc["h0"] = model.h0;
  doc["h0_prime"] = f.h0_prime;
  doc["S_H"] = rows_of(f.s);
  if (!model.labels.empty()) doc["labels"] = model.labels;
  emit_json(out, doc);
  return kExitOk;
}

Vector parse_csv_list(const std::string& text, const char* what) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (v.empty()) throw Error(ErrorCode::Parse, std::string(what) + " is empty");
  require_finite(v, what);
  return v;
}

struct EvolveOptions {
  std::string x0;
  double t_max = 10.0;
  int steps = 100;
  std::string route = "expm";
};

int cmd_evolve(const std::string& path, const EvolveOptions& e, const CommonOptions& o,
               std::ostream& out, std::ostream& err) {
  const ModelFile model = load_model(path, err);
  const QuadraticHamiltonian qh = to_hamiltonian(model);
  Vector x0 = e.x0.empty() ? Vector(qh.dim(), 0.0) : parse_csv_list(e.x0, "--x0");
  if (x0.size() != qh.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "--x0 has " + std::to_string(x0.size()) +
                                                  " entries, expected " +
                                                  std::to_string(qh.dim()));
  }
  if (e.steps < 1 || !std::isfinite(e.t_max)) {
    throw Error(ErrorCode::InvalidArgument, "--steps must be >= 1 and --t-max finite");
  }
  const auto tol = dynamics_tolerances(o);
  std::optional<NormalModeFrame> frame;
  if (e.route == "modes") frame = normal_mode_frame(qh, tol);
  if (e.route == "expm") fixed_point(qh, tol);

  std::vector<std::string> columns{"t"};
  for (auto& name : phase_space_names(qh.dof())) columns.push_back(name);
  columns.push_back("energy");

  std::vector<std::vector<std::optional<double>>> rows;
  for (int k = 0; k <= e.steps; ++k) {
    const double t = e.t_max * static_cast<double>(k) / static_cast<double>(e.steps);
    Vector x;
    if (e.route == "modes") {
      x = evolve_via_modes(*frame, x0, t);
    } else if (e.route == "generic") {
      x = evolve_generic(qh, x0, t);
    } else {
      x = evolve(qh, x0, t, tol);
    }
    std::vector<std::optional<double>> row{t};
    for (double v : x) row.emplace_back(v);
    row.emplace_back(energy(qh, x));
    rows.push_back(std::move(row));
  }
  json head;
  head["command"] = "evolve";
  head["route"] = e.route;
  head["ordering"] = "qp-blocks";
  emit_table(out, o.output, head, columns, rows);
  return kExitOk;
}

Vector parse_beta_spec(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) {
      throw Error(ErrorCode::Parse, "--beta range must be start:stop:count");
    }
    const double lo = parse_csv_list(parts[0], "--beta start").front();
    const double hi = parse_csv_list(parts[1], "--beta stop").front();
    const double count = parse_csv_list(parts[2], "--beta count").front();
    if (count < 2 || count != std::floor(count)) {
      throw Error(ErrorCode::Parse, "--beta range count must be an integer >= 2");
    }
    const auto c = static_cast<std::size_t>(count);
    Vector b(c);
    for (std::size_t i = 0; i < c; ++i) {
      b[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c - 1);
    }
    return b;
  }
  return parse_csv_list(spec, "--beta");
}

struct ThermoOptions {
  std::string beta = "1";
  bool classical = false;
  std::string covariance_path;
};

int cmd_thermo(const std::string& path, const ThermoOptions& t, const CommonOptions& o,
               std::ostream& out, std::ostream& err) {
  const ModelFile model = load_model(path, err);
  const QuadraticHamiltonian qh = to_hamiltonian(model);
  const Vector betas = parse_beta_spec(t.beta);
  for (double b : betas) {
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "every beta must be positive");
  }
  const auto tol = dynamics_tolerances(o);
  const ThermalSpectrum spec = thermal_spectrum(qh, tol);

  std::vector<std::string> columns{"beta", "logZ", "Z", "U", "F", "S", "C"};
  if (t.classical) {
    columns.insert(columns.end(), {"logZ_classical", "Z_classical", "Z_ratio"});
  }
  std::vector<std::vector<std::optional<double>>> rows;
  for (double b : betas) {
    const ThermoReport r = thermo_report(spec, b, model.hbar, model.kb);
    std::vector<std::optional<double>> row{b,
                                           r.partition.log_z,
                                           r.partition.z,
                                           r.internal_energy,
                                           r.free_energy,
                                           r.entropy,
                                           r.heat_capacity};
    if (t.classical) {
      const PartitionFunction c = classical_partition_function(spec, b, model.hbar);
      row.emplace_back(c.log_z);
      row.emplace_back(c.z);
      row.emplace_back(std::exp(r.partition.log_z - c.log_z));
    }
    rows.push_back(std::move(row));
  }

  if (!t.covariance_path.empty()) {
    if (betas.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "--covariance needs exactly one beta");
    }
    CovarianceFile cov;
    cov.n = model.n;
    cov.hbar = model.hbar;
    cov.matrix = thermal_covariance(ThermalModel{qh, betas.front(), model.hbar, model.kb}, tol);
    std::ofstream f(t.covariance_path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + t.covariance_path);
    f << covariance_to_json(cov);
  }

  json head;
  head["command"] = "thermo";
  head["hbar"] = model.hbar;
  head["kB"] = model.kb;
  head["spectrum"] = spec.mu;
  head["h0_prime"] = spec.h0_prime;
  emit_table(out, o.output, head, columns, rows);
  return kExitOk;
}

int cmd_uncertainty(const std::string& path, std::ostream& out, std::ostream& err) {
  const CovarianceFile cov = parse_covariance(read_file(path), err);
  const UncertaintyReport r = rs_check(CovarianceMatrix{cov.matrix, cov.mean}, cov.hbar);
  json doc;
  doc["command"] = "uncertainty";
  doc["hbar"] = cov.hbar;
  doc["valid"] = r.valid;
  doc["min_mu"] = optional_number(r.min_mu);
  doc["symplectic_spectrum"] =
      r.symplectic_spectrum ? json(*r.symplectic_spectrum) : json(nullptr);
  doc["symplectic_route_error"] =
      r.symplectic_route_error ? json(std::string(to_string(*r.symplectic_route_error)))
                               : json(nullptr);
  doc["delta_min_eig"] = r.delta_min_eig;
  doc["classical_ok"] = r.classical_ok;
  doc["routes_agree"] = r.routes_agree;
  emit_json(out, doc);
  return r.valid ? kExitOk : kExitCheckFailed;
}

int cmd_check_symplectic(const std::string& path, const CommonOptions& o, std::ostream& out) {
  const Matrix m = parse_matrix_file(read_file(path));
  const SymplecticCheck c = is_symplectic(m, o.tol);
  json doc;
  doc["command"] = "check-symplectic";
  doc["dimension"] = m.rows();
  doc["residual"] = c.residual;
  doc["tol"] = o.tol;
  doc["symplectic"] = c.symplectic;
  emit_json(out, doc);
  return c.symplectic ? kExitOk : kExitCheckFailed;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::OddDimension:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::NonSymmetric:
    case ErrorCode::NonSquare:
      return kExitParse;
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::SingularHessian:
      return kExitNotPositiveDefinite;
    default:
      return kExitFailure;
  }
}

double default_tolerance(std::ostream& err) {
  const char* env = std::getenv("SYMPLECTICA_TOL");
  if (env == nullptr || *env == '\0') return kDefaultTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0)) {
    err << "warning: ignoring invalid SYMPLECTICA_TOL='" << env << "'\n";
    return kDefaultTol;
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Williamson symplectic diagonalization and its applications", "symplectica"};
  app.require_subcommand(1);

  CommonOptions common;
  common.tol = default_tolerance(err);
  std::string path;
  EvolveOptions evolve_opts;
  ThermoOptions thermo_opts;
  std::size_t rs_n = 1;
  std::uint64_t seed = 0;
  double tau = 1.0;

  auto add_common = [&](CLI::App* sub, bool with_output) {
    sub->add_option("--tol", common.tol, "relative verification tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--pd-tol", common.pd_tol,
                    "positivity threshold: lambda_min > pd_tol * lambda_max")
        ->check(CLI::PositiveNumber);
    if (with_output) {
      sub->add_option("--output", common.output, "json or csv")
          ->check(CLI::IsMember({"json", "csv"}));
    }
  };

  auto* wil = app.add_subcommand("williamson", "symplectic spectrum and Williamson matrix");
  wil->add_option("model", path, "model file")->required();
  add_common(wil, true);

  auto* modes = app.add_subcommand("modes", "normal-mode frame of a quadratic Hamiltonian");
  modes->add_option("model", path, "model file")->required();
  add_common(modes, true);

  auto* evo = app.add_subcommand("evolve", "phase-space trajectory table");
  evo->add_option("model", path, "model file")->required();
  evo->add_option("--x0", evolve_opts.x0, "initial point, comma-separated (q..., p...)");
  evo->add_option("--t-max", evolve_opts.t_max, "final time");
  evo->add_option("--steps", evolve_opts.steps, "number of time steps");
  evo->add_option("--route", evolve_opts.route, "expm, modes or generic")
      ->check(CLI::IsMember({"expm", "modes", "generic"}));
  add_common(evo, true);

  auto* thermo = app.add_subcommand("thermo", "canonical-ensemble thermodynamics");
  thermo->add_option("model", path, "model file")->required();
  thermo->add_option("--beta", thermo_opts.beta, "list a,b,c or range start:stop:count");
  thermo->add_flag("--classical", thermo_opts.classical, "add classical-limit columns");
  thermo->add_option("--covariance", thermo_opts.covariance_path,
                     "write the thermal covariance file (single beta)");
  add_common(thermo, true);

  auto* unc = app.add_subcommand("uncertainty", "Robertson-Schrodinger check of a covariance");
  unc->add_option("covariance", path, "covariance file")->required();

  auto* chk = app.add_subcommand("check-symplectic", "residual |S^T J S - J|");
  chk->add_option("matrix", path, "matrix file")->required();
  add_common(chk, false);

  auto* rnd = app.add_subcommand("random-symplectic", "emit a random symplectic matrix file");
  rnd->add_option("--n", rs_n, "degrees of freedom")->check(CLI::PositiveNumber);
  rnd->add_option("--seed", seed, "RNG seed");
  rnd->add_option("--tau", tau, "generator scale");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (wil->parsed()) return cmd_williamson(path, common, out, err);
    if (modes->parsed()) return cmd_modes(path, common, out, err);
    if (evo->parsed()) return cmd_evolve(path, evolve_opts, common, out, err);
    if (thermo->parsed()) return cmd_thermo(path, thermo_opts, common, out, err);
    if (unc->parsed()) return cmd_uncertainty(path, out, err);
    if (chk->parsed()) return cmd_check_symplectic(path, common, out);
    if (rnd->parsed()) {
      out << matrix_to_json(random_symplectic(rs_n, seed, tau));
      return kExitOk;
    }
  } catch (const NotPositiveDefiniteError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotPositiveDefinite;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitFailure;
}

}  // namespace symplectica::cli
