#include <CLI11.hpp>
#include <limits>
#include <ostream>

#include "commands.hpp"
#include "curvfam/errors.hpp"

namespace curvfam::cli {

namespace {

void add_lambda_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option_function<double>("--lambda-min", [&cfg](double v) { cfg.lambda_min = v; }, "Smallest lambda");
  sub->add_option_function<double>("--lambda-max", [&cfg](double v) { cfg.lambda_max = v; }, "Largest lambda");
  sub->add_option_function<double>("--lambda-step", [&cfg](double v) { cfg.lambda_step = v; }, "Lambda increment")
      ->check(CLI::PositiveNumber);
}

void add_tol_option(CLI::App* sub, RunConfig& cfg, const std::string& help) {
  sub->add_option_function<double>("--tol", [&cfg](double v) { cfg.tol = v; }, help)->check(CLI::PositiveNumber);
}

void add_grid_option(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--grid", cfg.grid, "Samples on [0, 2pi]")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{64}, std::numeric_limits<std::size_t>::max() / 2));
}

void add_moment_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--max-moment", cfg.max_moment, "Highest moment order checked")
      ->capture_default_str()
      ->check(CLI::Range(0, 64));
  sub->add_option("--moment-tol", cfg.moment_tol, "Tolerance on normalized moments")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_discrete_input(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--no-balanced", cfg.no_balanced, "Generate the counterexample with this many pairs ('3' or 'n=3')");
  sub->add_flag("--even-tail", cfg.even_tail, "Close the counterexample with two edges instead of one");
  sub->add_flag("--curvature", cfg.curvature_input, "Input file holds discrete curvature, one value per line");
  sub->add_option("--subset-cap", cfg.subset_cap, "Largest interior vertex count searched exhaustively")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{62}));
  sub->add_option("--family", cfg.family, "Deform along a balanced subset: 'auto' or indices such as '2,5'");
  sub->add_option("--amplitude", cfg.amplitude, "Value of phi on the subset")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed one-parameter families of planar curves and polylines"};
  app.name("curvfam");
  app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  RunConfig cfg;

  auto* construct = app.add_subcommand("construct", "Build a closed family (k, f) from a gapped trigonometric curve");
  add_grid_option(construct, cfg);
  construct->add_option("--degree", cfg.degree, "Degree of the random curve")->capture_default_str();
  construct->add_option("--gap-modulus", cfg.gap_modulus, "Harmonics at multiples of this vanish")
      ->capture_default_str();
  construct->add_option("--seed", cfg.seed, "Seed of the random curve")->capture_default_str();
  construct->add_option("--generator", cfg.generator, "g in phi = g(cos(l t)): identity, square, exp, exp+2x, ...")
      ->capture_default_str();
  construct->add_option_function<int>("--harmonic", [&cfg](int v) { cfg.harmonic = v; },
                                      "l in phi = g(cos(l t)); a multiple of the gap modulus (default: the modulus)");
  construct->add_option("--curve", cfg.curve, "'circle' or a coefficient table 'j a b abar bbar'");
  add_lambda_options(construct, cfg);
  add_tol_option(construct, cfg, "Closure defect tolerance (default 1e-7)");
  add_moment_options(construct, cfg);
  construct->add_option("--out", cfg.out, "Pair file to write (default pair.txt)");

  auto* verify = app.add_subcommand("verify", "Check a pair against every closedness condition");
  verify->add_option("pair", cfg.input, "Pair file")->required();
  add_lambda_options(verify, cfg);
  add_tol_option(verify, cfg, "Closure defect tolerance (default 1e-7)");
  add_moment_options(verify, cfg);
  verify->add_option("--level-tol", cfg.level_tol, "Tolerance on relative level-set sums")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--boundary-tol", cfg.boundary_tol, "Tolerance of the endpoint derivative match")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--boundary-order", cfg.boundary_order, "Derivative order h of the endpoint match")
      ->capture_default_str()
      ->check(CLI::Range(1, 6));
  verify->add_option("--out", cfg.out, "Report directory (default reports)");

  auto* scan = app.add_subcommand("scan", "Closure defect of a pair over a lambda range");
  scan->add_option("pair", cfg.input, "Pair file")->required();
  add_lambda_options(scan, cfg);
  add_tol_option(scan, cfg, "Closure defect tolerance (default 1e-7)");
  scan->add_option("--out", cfg.out, "CSV file to write (default: standard output)");

  auto* discrete = app.add_subcommand("discrete", "Balanced subsets and deformation families of a polyline");
  discrete->add_option("polyline", cfg.input, "Polyline file, one 'x y' vertex per line");
  add_discrete_input(discrete, cfg);
  add_lambda_options(discrete, cfg);
  add_tol_option(discrete, cfg, "Balance and closure tolerance (default 1e-9)");
  discrete->add_option("--out", cfg.out, "Report directory (default: report on standard output)");

  auto* render = app.add_subcommand("render", "SVG frames of the family at each lambda");
  render->add_option("input", cfg.input, "Pair file or polyline file");
  add_discrete_input(render, cfg);
  add_lambda_options(render, cfg);
  add_tol_option(render, cfg, "Verification tolerance (default 1e-7 for pairs, 1e-9 for polylines)");
  add_moment_options(render, cfg);
  render->add_flag("--force", cfg.force, "Render even when verification fails");
  render->add_option("--columns", cfg.columns, "Montage columns; 0 writes one SVG per lambda")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  render->add_option("--stroke-width", cfg.stroke_width, "Stroke width in SVG user units")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  render->add_option("--out", cfg.out, "Frame directory (default frames) or montage file (default montage.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  const auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if ((cfg.command == "discrete" || cfg.command == "render") && cfg.input.empty() && cfg.no_balanced.empty()) {
    err << "error: " << cfg.command << " needs an input file or --no-balanced\n";
    return kUsageError;
  }

  try {
    if (cfg.command == "construct") return cmd_construct(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    if (cfg.command == "discrete") return cmd_discrete(cfg, out);
    return cmd_render(cfg, out);
  } catch (const curvfam::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kCheckFailure;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
}

}  // namespace curvfam::cli
