// Command line driver: convergence studies, operator statistics and M dumps.

#include "c1fem/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace c1fem;

namespace {

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error("bad mesh level '" + item + "'");
    }
  }
  return out;
}

std::array<Point, 3> parse_cell(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw Error("bad coordinate '" + item + "'");
    }
  }
  if (v.size() != 6) throw Error("--cell needs six comma-separated coordinates x0,y0,x1,y1,x2,y2");
  return {Point(v[0], v[1]), Point(v[2], v[3]), Point(v[4], v[5])};
}

// Writes to the file if a path is given, else to stdout.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C1 finite elements on triangles: convergence studies and operator statistics"};
  app.require_subcommand(1);

  std::string problem = "poisson", element = "lagrange:1", levels = "8,16,32", solver = "lu", out;
  double perturb = 0.2;
  bool no_scaling = false;
  int n = 8;
  std::string cell = "0,0,1,0,0,1";

  auto* study = app.add_subcommand("study", "L2 convergence study on perturbed unit-square meshes");
  study->add_option("--problem", problem, "poisson | biharmonic")->capture_default_str();
  study->add_option("--element", element, "lagrange:k | hermite | morley | argyris | bell")->capture_default_str();
  study->add_option("--levels", levels, "comma-separated N, e.g. 8,16,32")->capture_default_str();
  study->add_option("--perturb", perturb, "interior vertex perturbation")->capture_default_str();
  study->add_flag("--no-scaling", no_scaling, "disable derivative DoF scaling");
  study->add_option("--solver", solver, "lu | cg")->capture_default_str();
  study->add_option("--out", out, "CSV output (default stdout)");

  auto* stats = app.add_subcommand("stats", "DoFs, nonzeros per row and condition estimate");
  stats->add_option("--problem", problem)->capture_default_str();
  stats->add_option("--element", element, "one element or a comma-separated list")->capture_default_str();
  stats->add_option("--n", n, "mesh size (at most 16)")->capture_default_str();
  stats->add_flag("--no-scaling", no_scaling, "disable derivative DoF scaling");
  stats->add_option("--out", out, "CSV output (default stdout)");

  auto* dump = app.add_subcommand("dump-m", "transformation matrix M of one cell as CSV");
  dump->add_option("--element", element)->capture_default_str();
  dump->add_option("--cell", cell, "x0,y0,x1,y1,x2,y2")->capture_default_str();
  dump->add_flag("--no-scaling", no_scaling, "print the unscaled M");
  dump->add_option("--out", out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*study) {
      StudySpec spec;
      spec.problem = parse_problem(problem);
      spec.element = element;
      spec.levels = parse_levels(levels);
      spec.perturb = perturb;
      spec.scaled = !no_scaling;
      if (solver == "lu") {
        spec.solver = SolverKind::LU;
      } else if (solver == "cg") {
        spec.solver = SolverKind::CG;
      } else {
        throw Error("unknown solver '" + solver + "'");
      }
      spec.output = out;
      const auto rows = run_convergence_study(spec);
      if (out.empty()) write_convergence_csv(std::cout, rows);
    } else if (*stats) {
      std::vector<StatsRow> rows;
      std::stringstream ss(element);
      std::string item;
      // "lagrange:k" contains no comma, so a plain split is enough.
      while (std::getline(ss, item, ',')) rows.push_back(run_stats_report(parse_problem(problem), item, n, !no_scaling));
      emit(out, [&](std::ostream& os) { write_stats_csv(os, rows); });
    } else if (*dump) {
      const MappedElement el = parse_element(element);
      const TransformMatrix t = el.transform(cell_geometry(parse_cell(cell)), !no_scaling);
      emit(out, [&](std::ostream& os) { write_transform_csv(os, t); });
    }
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
