#pragma once

#include "c1fem/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace c1fem {

enum class Problem { Poisson, Biharmonic };

std::string to_string(Problem problem);
Problem parse_problem(const std::string& text);

/// "lagrange:k", "hermite", "morley", "argyris" or "bell" (case-insensitive).
MappedElement parse_element(const std::string& text);

/// Form used for the given model problem, or throws if the pair is not
/// supported (Morley for Poisson, Hermite and P1 for the biharmonic problem).
FormSpec study_form(Problem problem, const MappedElement& element);

/// Manufactured solutions on the unit square.
///   Poisson:    u = sin(pi x) sin(pi y),          f = 2 pi^2 u
///   Biharmonic: u = x^2 (1-x)^2 y^2 (1-y)^2,      f = Lap^2 u
Jet exact_solution(Problem problem, const Point& p);
double source_term(Problem problem, const Point& p);

struct StudySpec {
  Problem problem = Problem::Poisson;
  std::string element = "lagrange:1";
  std::vector<int> levels{8, 16, 32};
  double perturb = 0.2;
  bool scaled = true;
  SolverKind solver = SolverKind::LU;
  std::string output;  // CSV path; empty for none

  void validate() const;
};

struct ConvergenceRow {
  int n = 0;
  int dofs = 0;
  double error = 0.0;
  double rate = 0.0;  // NaN on the first rung
  int iterations = 0;
  double residual = 0.0;
};

/// Solves the study's problem on every rung.  If a rung fails, the rows so
/// far are written to the CSV before the error propagates.
std::vector<ConvergenceRow> run_convergence_study(const StudySpec& spec);

/// Header "N,dofs,error,rate"; the first rate is left empty.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

struct StatsRow {
  std::string element;
  int dofs = 0;
  double nnz_per_row = 0.0;
  double condition = 0.0;
};

/// Sparsity and conditioning of the problem's operator on the regular N x N mesh.
/// Unlike the study, Poisson accepts Morley here.
StatsRow run_stats_report(Problem problem, const std::string& element, int n, bool scaled = true);

/// Header "element,dofs,nnz_per_row,condition".
void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows);

}  // namespace c1fem
