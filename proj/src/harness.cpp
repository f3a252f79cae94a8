#include "c1fem/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace c1fem {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// g(t) = t^2 (1-t)^2 and its derivatives.
double g0(double t) { return t * t * (1 - t) * (1 - t); }
double g1(double t) { return 2 * t * (1 - t) * (1 - 2 * t); }
double g2(double t) { return 2 - 12 * t + 12 * t * t; }

void write_csv_file(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  write_convergence_csv(out, rows);
}

}  // namespace

std::string to_string(Problem problem) { return problem == Problem::Poisson ? "poisson" : "biharmonic"; }

Problem parse_problem(const std::string& text) {
  const std::string t = lower(text);
  if (t == "poisson") return Problem::Poisson;
  if (t == "biharmonic") return Problem::Biharmonic;
  throw Error("unknown problem '" + text + "'");
}

MappedElement parse_element(const std::string& text) {
  const std::string t = lower(text);
  if (t.rfind("lagrange:", 0) == 0) {
    const std::string k = t.substr(9);
    if (k.size() != 1 || !std::isdigit(static_cast<unsigned char>(k[0]))) throw Error("bad Lagrange degree in '" + text + "'");
    return MappedElement(Family::Lagrange, k[0] - '0');
  }
  if (t == "hermite") return MappedElement(Family::Hermite);
  if (t == "morley") return MappedElement(Family::Morley);
  if (t == "argyris") return MappedElement(Family::Argyris);
  if (t == "bell") return MappedElement(Family::Bell);
  throw Error("unknown element '" + text + "'");
}

FormSpec study_form(Problem problem, const MappedElement& element) {
  const Family f = element.family();
  if (problem == Problem::Poisson) {
    if (f == Family::Morley) throw Error("Morley is not H1-conforming and is excluded from the Poisson study");
    return FormSpec::poisson_nitsche(default_poisson_penalty(element));
  }
  if (f == Family::Lagrange && element.degree() >= 2) return FormSpec::plate_ip(default_ip_penalty(element.degree()));
  if (f == Family::Morley || f == Family::Argyris || f == Family::Bell) return default_clamped_plate(element, 0.3);
  throw Error(element.name() + " is not supported for the biharmonic problem");
}

Jet exact_solution(Problem problem, const Point& p) {
  const double x = p.x(), y = p.y();
  Jet j;
  if (problem == Problem::Poisson) {
    const double pi = M_PI;
    const double sx = std::sin(pi * x), sy = std::sin(pi * y), cx = std::cos(pi * x), cy = std::cos(pi * y);
    j.value = sx * sy;
    j.grad << pi * cx * sy, pi * sx * cy;
    j.hess << -pi * pi * sx * sy, pi * pi * cx * cy, pi * pi * cx * cy, -pi * pi * sx * sy;
  } else {
    j.value = g0(x) * g0(y);
    j.grad << g1(x) * g0(y), g0(x) * g1(y);
    j.hess << g2(x) * g0(y), g1(x) * g1(y), g1(x) * g1(y), g0(x) * g2(y);
  }
  return j;
}

double source_term(Problem problem, const Point& p) {
  if (problem == Problem::Poisson) return 2 * M_PI * M_PI * exact_solution(problem, p).value;
  return 24 * g0(p.y()) + 2 * g2(p.x()) * g2(p.y()) + 24 * g0(p.x());
}

void StudySpec::validate() const {
  if (levels.empty()) throw Error("no mesh levels given");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw Error("mesh sizes must be positive");
    if (i > 0) {
      const int ratio = levels[i] / levels[0];
      if (levels[i] <= levels[i - 1] || levels[i] % levels[0] != 0 || (ratio & (ratio - 1)) != 0) {
        throw Error("mesh sizes must be the coarsest size times increasing powers of two");
      }
    }
  }
  if (perturb < 0 || perturb >= 0.5) throw Error("perturbation must lie in [0, 0.5)");
  study_form(problem, parse_element(element));
}

std::vector<ConvergenceRow> run_convergence_study(const StudySpec& spec) {
  spec.validate();
  const MappedElement element = parse_element(spec.element);
  const FormSpec form = study_form(spec.problem, element);
  std::vector<ConvergenceRow> rows;
  try {
    for (int n : spec.levels) {
      const FunctionSpace space(build_unit_square_mesh(n, spec.perturb), element, spec.scaled);
      const SparseMatrix A = assemble_operator(space, form);
      const Vector b = assemble_load(space, [&](const Point& p) { return source_term(spec.problem, p); });
      const SolveReport report = solve(A, b, spec.solver);
      ConvergenceRow row;
      row.n = n;
      row.dofs = space.num_dofs();
      row.error = l2_error(space, report.x, [&](const Point& p) { return exact_solution(spec.problem, p).value; });
      row.rate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : std::log2(rows.back().error / row.error) / std::log2(double(n) / rows.back().n);
      row.iterations = report.iterations;
      row.residual = report.residual;
      rows.push_back(row);
    }
  } catch (const Error&) {
    write_csv_file(spec.output, rows);
    throw;
  }
  write_csv_file(spec.output, rows);
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "N,dofs,error,rate\n" << std::setprecision(17);
  for (const ConvergenceRow& r : rows) {
    out << r.n << ',' << r.dofs << ',' << r.error << ',';
    if (!std::isnan(r.rate)) out << r.rate;
    out << '\n';
  }
}

StatsRow run_stats_report(Problem problem, const std::string& element_text, int n, bool scaled) {
  if (n < 1 || n > 16) throw Error("stats report needs 1 <= N <= 16");
  const MappedElement element = parse_element(element_text);
  // Morley has no convergence study for Poisson, but its Nitsche operator is still well defined.
  const FormSpec form = problem == Problem::Poisson ? FormSpec::poisson_nitsche(default_poisson_penalty(element))
                                                    : study_form(problem, element);
  const FunctionSpace space(build_unit_square_mesh(n), element, scaled);
  const MatrixStats s = matrix_stats(assemble_operator(space, form));
  return {element.name(), s.total_dofs, s.nnz_per_row, s.condition_estimate};
}

void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << "element,dofs,nnz_per_row,condition\n" << std::setprecision(17);
  for (const StatsRow& r : rows) out << r.element << ',' << r.dofs << ',' << r.nnz_per_row << ',' << r.condition << '\n';
}

}  // namespace c1fem
