// Command-line front end: solve and check boundary value problems described
// by JSON problem files; results land next to the problem file or in
// --out-dir as CSV/text bundles.

#include <CLI11.hpp>

#include <cliffbvp/cliffbvp.hpp>

namespace {

void add_common_flags(CLI::App* cmd, std::string& path, cliffbvp::RunOptions& opt,
                      std::string& probe_eps_text) {
  cmd->add_option("problem", path, "problem file (JSON)")->required();
  cmd->add_option("--out-dir", opt.out_dir, "directory for the result bundle");
  double quad_R = 0.0;
  cmd->add_option_function<double>(
      "--quad-R", [&opt](double v) { opt.quad_R = v; },
      "override the quadrature truncation radius");
  (void)quad_R;
  cmd->add_option_function<int>(
      "--quad-grid", [&opt](int v) { opt.quad_grid = v; },
      "override the base grid cells per axis");
  cmd->add_option_function<double>(
      "--quad-tol", [&opt](double v) { opt.quad_tol = v; },
      "override the quadrature tolerance");
  cmd->add_option("--probe-eps", probe_eps_text,
                  "comma list of boundary approach offsets, e.g. 0.1,0.05,0.025");
  cmd->add_flag("--no-verify", opt.no_verify, "skip the verification pass");
  cmd->add_option("--seed", opt.seed, "seed for verification probe sampling");
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary value problems for monogenic functions on the upper half space"};
  app.require_subcommand(1);

  std::string solve_path, check_path;
  std::string solve_eps, check_eps;
  cliffbvp::RunOptions solve_opt, check_opt;

  CLI::App* solve = app.add_subcommand("solve", "solve a problem file and verify");
  add_common_flags(solve, solve_path, solve_opt, solve_eps);

  CLI::App* check = app.add_subcommand("check", "class and solvability reports only");
  add_common_flags(check, check_path, check_opt, check_eps);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (!solve_eps.empty()) solve_opt.probe_eps = parse_eps_list(solve_eps);
      return cliffbvp::run_solve(solve_path, solve_opt);
    }
    if (!check_eps.empty()) check_opt.probe_eps = parse_eps_list(check_eps);
    return cliffbvp::run_check(check_path, check_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
