#include "microcosm/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "microcosm/oracle.hpp"
#include "microcosm/orbit.hpp"
#include "microcosm/riccati.hpp"
#include "microcosm/roots.hpp"
#include "microcosm/sachs_flow.hpp"
#include "microcosm/sachs_series.hpp"

namespace microcosm::cli {

namespace {

using json = nlohmann::ordered_json;
using Eigen::MatrixXd;

constexpr double kFdStep = 1e-5;

const char* command_name(Command c) {
  switch (c) {
    case Command::riccati: return "riccati";
    case Command::sachs: return "sachs";
    case Command::orbit: return "orbit";
    case Command::conjugate: return "conjugate";
    case Command::series: return "series";
    case Command::verify: return "verify";
  }
  return "?";
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json matrix_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return json{{"re", re}, {"im", im}};
}

MatrixXd read_real_matrix(const json& j, Index n, const std::string& field) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    throw InvalidInput("field '" + field + "': expected an " + std::to_string(n) + "×" +
                       std::to_string(n) + " array");
  MatrixXd m(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw InvalidInput("field '" + field + "': row " + std::to_string(i) + " has wrong length");
    for (Index k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number())
        throw InvalidInput("field '" + field + "': entry (" + std::to_string(i) + "," +
                           std::to_string(k) + ") is not a number");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

CMatrix read_matrix(const json& j, Index n, const std::string& field) {
  if (j.is_object()) {
    if (!j.contains("re")) throw InvalidInput("field '" + field + "': missing 're'");
    CMatrix m = read_real_matrix(j["re"], n, field + ".re").cast<Complex>();
    if (j.contains("im")) m += Complex(0.0, 1.0) * read_real_matrix(j["im"], n, field + ".im");
    return m;
  }
  return read_real_matrix(j, n, field).cast<Complex>();
}

double number_field(const json& doc, const char* key) {
  if (!doc[key].is_number())
    throw InvalidInput(std::string("field '") + key + "': expected a number");
  return doc[key].get<double>();
}

Dim2Params params_from_spec(const MicrocosmSpec& spec) {
  const MicrocosmSpec a = convert_form(spec, MetricForm::Alekseevsky);
  return {(a.p(0, 0) + a.p(1, 1)) / 2, (a.p(0, 0) - a.p(1, 1)) / 2, a.p(0, 1), a.omega(1, 0)};
}

std::vector<double> sample_points(const JobSpec& job) {
  return roots::linspace(job.u_lo, job.u_hi, static_cast<std::size_t>(job.samples));
}

CMatrix brinkmann_p(const JobSpec& job) {
  return convert_form(job.spec, MetricForm::Brinkmann).p.cast<Complex>();
}

CMatrix alekseevsky_p(const JobSpec& job) {
  return convert_form(job.spec, MetricForm::Alekseevsky).p.cast<Complex>();
}

std::function<CMatrix(double)> tidal_fn(const JobSpec& job) {
  const MicrocosmSpec b = convert_form(job.spec, MetricForm::Brinkmann);
  return [b](double u) { return tidal_at(b, u); };
}

double sachs_residual(const std::function<CMatrix(double)>& s_of,
                      const std::function<CMatrix(double)>& tidal, double u) {
  const CMatrix s = s_of(u);
  const CMatrix ds = (s_of(u + kFdStep) - s_of(u - kFdStep)) / (2 * kFdStep);
  return (ds + s * s + tidal(u)).norm();
}

CMatrix default_s0(const JobSpec& job) {
  return job.s0 ? *job.s0 : CMatrix::Zero(job.spec.n, job.spec.n);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void flatten_header(std::vector<std::string>& h, const std::string& name, Index n) {
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (const char* part : {"re", "im"})
        h.push_back(name + std::to_string(i) + std::to_string(j) + "_" + part);
}

void flatten_row(std::vector<double>& row, const CMatrix* m, Index n) {
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      row.push_back(m ? (*m)(i, j).real() : NAN);
      row.push_back(m ? (*m)(i, j).imag() : NAN);
    }
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << "\n" << std::setprecision(17);
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

json riccati_cmd(const JobSpec& job, Table&) {
  const CMatrix omega = job.spec.omega_c();
  const CMatrix pb = brinkmann_p(job);
  json doc{{"solutions", json::array()}, {"families", json::array()}};
  if (job.dim2) {
    const ConstantSolutions2x2 all = constant_solutions_2x2(*job.dim2);
    for (const Dim2Solution& s : all.isolated) {
      const CMatrix x = s.s_matrix();
      doc["solutions"].push_back({{"s", complex_json(s.s)},
                                  {"t", complex_json(s.t)},
                                  {"u0", complex_json(s.u0)},
                                  {"S", matrix_json(x)},
                                  {"real", s.is_real(1e-10)},
                                  {"residual", algebraic_sachs_residual(x, omega, pb)}});
    }
    for (const Dim2Family& f : all.families) {
      const CMatrix x = f.member(0.5).s_matrix();
      doc["families"].push_back({{"description", f.description()},
                                 {"member_u0", 0.5},
                                 {"member_S", matrix_json(x)},
                                 {"residual", algebraic_sachs_residual(x, omega, pb)}});
    }
  } else {
    const CMatrix x = solve_algebraic_sachs(omega, pb);
    doc["solutions"].push_back(
        {{"S", matrix_json(x)}, {"residual", algebraic_sachs_residual(x, omega, pb)}});
  }
  return doc;
}

json sachs_cmd(const JobSpec& job, Table& table) {
  const CMatrix omega = job.spec.omega_c();
  const CMatrix pb = brinkmann_p(job);
  const SachsIVP ivp{omega, pb, solve_algebraic_sachs(omega, pb), default_s0(job)};
  const auto tidal = tidal_fn(job);
  const Index n = job.spec.n;
  json doc{{"sigma", matrix_json(ivp.sigma)}, {"s0", matrix_json(ivp.s0)}, {"table", json::array()}};
  table.header = {"u"};
  flatten_header(table.header, "S", n);
  table.header.push_back("residual");
  for (double u : sample_points(job)) {
    std::vector<double> row{u};
    try {
      const CMatrix s = ivp_general(ivp, u);
      const double res =
          sachs_residual([&](double v) { return ivp_general(ivp, v); }, tidal, u);
      doc["table"].push_back({{"u", u}, {"S", matrix_json(s)}, {"residual", res}});
      flatten_row(row, &s, n);
      row.push_back(res);
    } catch (const PoleError&) {
      doc["table"].push_back({{"u", u}, {"pole", true}, {"residual", nullptr}});
      flatten_row(row, nullptr, n);
      row.push_back(NAN);
    }
    table.rows.push_back(row);
  }
  return doc;
}

json orbit_cmd(const JobSpec& job, Table& table) {
  const CMatrix omega = job.spec.omega_c();
  const CMatrix sigma = solve_algebraic_sachs(omega, brinkmann_p(job));
  const OrbitGenerator g = build_generator(sigma, omega);
  const Index n = job.spec.n;
  json doc{{"sigma", matrix_json(sigma)}, {"A", matrix_json(g.a)}, {"W", matrix_json(g.w)},
           {"H0", matrix_json(g.h0)},     {"M0", matrix_json(g.m0)}, {"table", json::array()}};
  table.header = {"u"};
  flatten_header(table.header, "H", n);
  table.header.push_back("residual");
  for (double u : sample_points(job)) {
    const GrassmannCurvePoint pt = orbit_point(g, u);
    const OrbitReport rep = verify_orbit(g, {u});
    std::vector<double> row{u};
    json entry{{"u", u}};
    if (pt.h) {
      entry["H"] = matrix_json(*pt.h);
      entry["at_infinity"] = false;
    } else {
      entry["H"] = nullptr;
      entry["at_infinity"] = true;
    }
    entry["residual"] = rep.max_hdot_error;
    doc["table"].push_back(entry);
    flatten_row(row, pt.h ? &*pt.h : nullptr, n);
    row.push_back(rep.max_hdot_error);
    table.rows.push_back(row);
  }
  return doc;
}

json conjugate_cmd(const JobSpec& job, Table& table) {
  table.header = {"u", "residual"};
  json doc{{"points", json::array()}};
  if (job.dim2) {
    const Dim2Params& prm = *job.dim2;
    const ConjugateSearch found = find_conjugate_points(prm, job.u_hi);
    const auto [x, y] = quadratic_roots_xy(prm);
    for (double u : found.points) {
      if (u < job.u_lo) continue;
      const double res = std::abs(conjugate_condition_xy(x, y, -prm.w * prm.w, u));
      doc["points"].push_back({{"u", u}, {"residual", res}});
      table.rows.push_back({u, res});
    }
    const ExistenceReport ex = existence_predicates(prm);
    doc["exists"] = ex.exists == Existence::yes ? "yes" : ex.exists == Existence::no ? "no" : "unknown";
    doc["reasons"] = ex.reasons;
    doc["oracle_verified"] = found.verified;
    return doc;
  }
  const Index n = job.spec.n;
  const OdeRun run = integrate_jacobi(job.spec.omega_c(), alekseevsky_p(job),
                                      CMatrix::Zero(n, n), CMatrix::Identity(n, n),
                                      oracle_grid(0.0, job.u_hi));
  for (double u : detect_conjugate(run)) {
    if (u < job.u_lo) continue;
    const CMatrix y = run.state_at(u);
    Eigen::JacobiSVD<CMatrix> svd(y.topRows(n));
    const double res = svd.singularValues()(n - 1) / y.norm();
    doc["points"].push_back({{"u", u}, {"residual", res}});
    table.rows.push_back({u, res});
  }
  const double e = energy_trace(job.spec);
  doc["exists"] = e > 0 ? "yes" : "unknown";
  doc["reasons"] = json::array();
  if (e > 0) doc["reasons"].push_back("trace energy " + std::to_string(e) + " > 0");
  return doc;
}

json series_cmd(const JobSpec& job, Table& table) {
  const Index n = job.spec.n;
  const CMatrix omega = job.spec.omega_c();
  const CMatrix pb = brinkmann_p(job);
  const double t = job.u_lo;
  const CMatrix left = mat_exp(-t * omega), right = mat_exp(t * omega);
  std::vector<CMatrix> jets;
  CMatrix ad = pb;
  for (int k = 0; k <= job.order; ++k) {
    jets.push_back(left * ad * right);
    ad = ad * omega - omega * ad;
  }
  const SachsJet<Complex> jet = recursion_coeffs<Complex>(jets, job.order, t);
  json doc{{"base", t}, {"order", job.order}, {"coefficients", json::array()}, {"table", json::array()}};
  for (std::size_t k = 0; k < jet.coeffs.size(); ++k)
    doc["coefficients"].push_back({{"n", k},
                                   {"S", matrix_json(jet.coeffs[k])},
                                   {"residual", symmetry_defect(jet.coeffs[k])}});
  const auto tidal = tidal_fn(job);
  auto s_of = [&](double u) { return CMatrix(eval_truncated(jet, u)); };
  table.header = {"u"};
  flatten_header(table.header, "S", n);
  table.header.push_back("residual");
  for (double u : sample_points(job)) {
    if (std::abs(u - t) < 10 * kFdStep) continue;
    const CMatrix s = s_of(u);
    const double res = sachs_residual(s_of, tidal, u);
    doc["table"].push_back({{"u", u}, {"S", matrix_json(s)}, {"residual", res}});
    std::vector<double> row{u};
    flatten_row(row, &s, n);
    row.push_back(res);
    table.rows.push_back(row);
  }
  return doc;
}

json verify_cmd(const JobSpec& job, Table& table, bool& passed) {
  const Index n = job.spec.n;
  const CMatrix omega = job.spec.omega_c();
  const CMatrix pb = brinkmann_p(job);
  const CMatrix pa = alekseevsky_p(job);
  json checks = json::array();
  table.header = {"check", "value", "tol", "residual"};
  auto add = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    passed = passed && ok;
    checks.push_back({{"name", name}, {"value", value}, {"tol", tol}, {"pass", ok}});
    table.rows.push_back({static_cast<double>(table.rows.size()), value, tol, value});
  };

  const CMatrix sigma = solve_algebraic_sachs(omega, pb);
  add("riccati_residual", algebraic_sachs_residual(sigma, omega, pb),
      1e-8 * (1.0 + pb.norm() + omega.squaredNorm()));

  const double lo = std::max(0.0, job.u_lo);
  const SachsIVP ivp{omega, pb, sigma, default_s0(job)};
  const OdeRun sachs_run = integrate_sachs(tidal_fn(job), ivp.s0, oracle_grid(lo, job.u_hi));
  double sachs_gap = 0.0;
  for (std::size_t i = 0; i < sachs_run.grid.size(); i += 50) {
    if (sachs_run.states[i].norm() > 1e3) break;
    try {
      sachs_gap = std::max(sachs_gap, (ivp_general(ivp, sachs_run.grid[i]) - sachs_run.states[i])
                                          .cwiseAbs().maxCoeff());
    } catch (const PoleError&) {
      break;
    }
  }
  add("sachs_closed_form_vs_oracle", sachs_gap, job.tol);

  const OrbitGenerator g = build_generator(sigma, omega);
  const CMatrix basis = jacobi_basis_map(sigma, g.h0);
  double orbit_gap = 0.0;
  for (double u : sample_points(job)) {
    orbit_gap = std::max(orbit_gap, subspace_gap(basis * orbit_point(g, u).frame,
                                                 vanishing_fields_cauchy(omega, pa, u)));
  }
  add("orbit_vs_oracle_subspace_gap", orbit_gap, job.tol);

  if (job.dim2) {
    const ConjugateSearch found = find_conjugate_points(*job.dim2, job.u_hi);
    add("conjugate_points_vs_oracle", found.verified ? 0.0 : 1.0, 0.5);
  }
  (void)n;
  return json{{"checks", checks}, {"passed", passed}};
}

}  // namespace

void JobSpec::validate() const {
  spec.validate();
  if (!(u_lo < u_hi)) throw InvalidInput("job: u range must satisfy lo < hi");
  if (samples < 2) throw InvalidInput("job: samples must be at least 2");
  if (!(tol > 0)) throw InvalidInput("job: tol must be positive");
  if (order < 0 || order > kSachsSeriesMaxOrder)
    throw InvalidInput("job: order must lie in [0, " + std::to_string(kSachsSeriesMaxOrder) + "]");
  if (s0) {
    if (s0->rows() != spec.n || s0->cols() != spec.n) throw InvalidInput("field 's0': shape mismatch");
    require_symmetric(*s0, 1e-12, "field 's0'");
  }
}

void load_spec_document(const std::string& text, JobSpec& job) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw InvalidInput("parse error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("spec document must be a JSON object");

  const bool shorthand = doc.contains("A") || doc.contains("B") || doc.contains("C");
  if (shorthand) {
    Dim2Params prm;
    for (const char* key : {"A", "B", "C", "w"})
      if (!doc.contains(key)) throw InvalidInput(std::string("field '") + key + "': missing");
    prm.a = number_field(doc, "A");
    prm.b = number_field(doc, "B");
    prm.c = number_field(doc, "C");
    prm.w = number_field(doc, "w");
    job.spec = make_spec(prm.omega(), prm.p(), MetricForm::Alekseevsky);
    job.dim2 = prm;
  } else {
    for (const char* key : {"n", "form", "omega", "p"})
      if (!doc.contains(key)) throw InvalidInput(std::string("field '") + key + "': missing");
    if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1)
      throw InvalidInput("field 'n': expected a positive integer");
    const Index n = doc["n"].get<Index>();
    if (!doc["form"].is_string()) throw InvalidInput("field 'form': expected a string");
    const std::string form = doc["form"].get<std::string>();
    MetricForm mf;
    if (form == "brinkmann")
      mf = MetricForm::Brinkmann;
    else if (form == "alekseevsky")
      mf = MetricForm::Alekseevsky;
    else
      throw InvalidInput("field 'form': expected \"brinkmann\" or \"alekseevsky\"");
    MatrixXd omega;
    if (doc["omega"].is_number()) {
      if (n != 2) throw InvalidInput("field 'omega': scalar shorthand needs n = 2");
      const double w = doc["omega"].get<double>();
      omega.resize(2, 2);
      omega << 0.0, -w, w, 0.0;
    } else {
      omega = read_real_matrix(doc["omega"], n, "omega");
    }
    const MatrixXd p = read_real_matrix(doc["p"], n, "p");
    job.spec = MicrocosmSpec{n, omega, p, mf};
    job.spec.validate();
    if (n == 2) job.dim2 = params_from_spec(job.spec);
  }
  if (doc.contains("s0")) job.s0 = read_matrix(doc["s0"], job.spec.n, "s0");
}

int run(const JobSpec& job, std::ostream& out) {
  job.validate();
  Table table;
  bool passed = true;
  json body;
  switch (job.command) {
    case Command::riccati: body = riccati_cmd(job, table); break;
    case Command::sachs: body = sachs_cmd(job, table); break;
    case Command::orbit: body = orbit_cmd(job, table); break;
    case Command::conjugate: body = conjugate_cmd(job, table); break;
    case Command::series: body = series_cmd(job, table); break;
    case Command::verify: body = verify_cmd(job, table, passed); break;
  }
  if (job.csv) {
    write_csv(out, table);
  } else {
    json doc{{"schema", 1},
             {"command", command_name(job.command)},
             {"n", job.spec.n},
             {"u_range", {job.u_lo, job.u_hi}}};
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    out << doc.dump(2) << "\n";
  }
  return passed ? 0 : 3;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneous plane-wave toolkit: Sachs/Riccati solutions, symplectic orbits, "
               "conjugate points"};
  std::string command, spec_path;
  JobSpec job;
  app.add_option("command", command, "riccati | sachs | orbit | conjugate | series | verify")
      ->required()
      ->check(CLI::IsMember({"riccati", "sachs", "orbit", "conjugate", "series", "verify"}));
  app.add_option("--spec", spec_path, "JSON microcosm file: {n, form, omega, p} or {A, B, C, w}")
      ->required();
  app.add_option("--u-min", job.u_lo, "lower end of the u range")->capture_default_str();
  app.add_option("--u-max", job.u_hi, "upper end of the u range")->capture_default_str();
  app.add_option("--samples", job.samples, "number of sample points")->capture_default_str();
  app.add_option("--tol", job.tol, "pass tolerance of the verify checks")->capture_default_str();
  app.add_option("--order", job.order, "series order (max 30)")->capture_default_str();
  app.add_flag("--csv", job.csv, "emit CSV: u,<flattened entries>,residual");
  app.add_option("--out", job.output_path, "output file (default stdout)");
  app.footer(
      "Module defaults: rank tol 2n·eps·σmax, Sylvester rank tol 1e-10, pole tol 1e-13, "
      "oracle step 1e-3 with local error 1e-10, Sachs blow-up at |S| > 1e8, "
      "conjugate sampling 1e4 per unit u.");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  static const std::map<std::string, Command> kCommands{
      {"riccati", Command::riccati}, {"sachs", Command::sachs},   {"orbit", Command::orbit},
      {"conjugate", Command::conjugate}, {"series", Command::series}, {"verify", Command::verify}};
  job.command = kCommands.at(command);

  try {
    std::ifstream in(spec_path);
    if (!in) throw InvalidInput("cannot open spec file '" + spec_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    load_spec_document(buf.str(), job);
    job.validate();
    std::ostringstream artifact;
    const int status = run(job, artifact);
    if (job.output_path.empty()) {
      out << artifact.str();
    } else {
      std::ofstream file(job.output_path, std::ios::binary);
      if (!file) throw InvalidInput("cannot open output file '" + job.output_path + "'");
      file << artifact.str();
    }
    return status;
  } catch (const InvalidInput& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace microcosm::cli
