#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "curvfam/errors.hpp"
#include "curvfam/familygen.hpp"
#include "curvfam/io.hpp"
#include "curvfam/polyline.hpp"
#include "curvfam/smoothcurve.hpp"
#include "svg.hpp"

namespace curvfam::cli {

namespace {

namespace fs = std::filesystem;
using io::format_real;

constexpr double kSmoothTolerance = 1e-7;
constexpr double kDiscreteTolerance = 1e-9;
constexpr std::size_t kMaxPathPoints = 1024;

struct LambdaDefaults {
  double lo, hi, step;
};

std::vector<double> lambdas(const RunConfig& cfg, LambdaDefaults d) {
  return lambda_grid(cfg.lambda_min.value_or(d.lo), cfg.lambda_max.value_or(d.hi), cfg.lambda_step.value_or(d.step));
}

VerifyOptions verify_options(const RunConfig& cfg, std::vector<double> lams) {
  VerifyOptions opts;
  opts.scan_tolerance = cfg.tol.value_or(kSmoothTolerance);
  opts.moment_tolerance = cfg.moment_tol;
  opts.max_moment = cfg.max_moment;
  opts.lambdas = std::move(lams);
  return opts;
}

const char* verdict(bool pass) { return pass ? "pass" : "fail"; }

std::ifstream open_input(const std::string& path) {
  if (path.empty()) throw InputError("no input file given");
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  return in;
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

template <class Writer>
std::string to_text(Writer&& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

FamilyPair load_pair(const std::string& path) {
  auto in = open_input(path);
  return io::read_pair(in);
}

bool is_pair_file(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return line.compare(first, 12, "curvfam-pair") == 0;
  }
  return false;
}

// Runs fn(0..count-1) on up to hardware_concurrency threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

std::string title_for(double lambda) { return "lambda=" + format_real(lambda); }

Path decimate(const std::vector<std::complex<double>>& pts) {
  const std::size_t stride = std::max<std::size_t>(1, (pts.size() - 1 + kMaxPathPoints - 1) / kMaxPathPoints);
  Path out;
  for (std::size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
  if (out.empty() || (pts.size() - 1) % stride != 0) out.push_back(pts.back());
  return out;
}

int parse_pair_count(const std::string& spec) {
  std::string digits = spec;
  if (digits.rfind("n=", 0) == 0) digits = digits.substr(2);
  char* end = nullptr;
  const long v = std::strtol(digits.c_str(), &end, 10);
  if (digits.empty() || *end != '\0' || v < 1 || v > 1000) {
    throw ValidationError("--no-balanced expects a positive pair count such as '3' or 'n=3', got '" + spec + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::size_t> parse_subset(const std::string& spec) {
  std::vector<std::size_t> out;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ',');) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || v < 2) throw ValidationError("bad subset index '" + tok + "' in --family");
    out.push_back(static_cast<std::size_t>(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string subset_text(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

struct DiscreteInput {
  Polyline polyline;
  std::string origin;
  bool generated = false;
};

DiscreteInput load_discrete(const RunConfig& cfg) {
  if (!cfg.no_balanced.empty()) {
    const int n = parse_pair_count(cfg.no_balanced);
    return {no_balanced_polyline(n, cfg.even_tail),
            "no-balanced n=" + std::to_string(n) + (cfg.even_tail ? " even-tail" : " odd-tail"), true};
  }
  auto in = open_input(cfg.input);
  if (cfg.curvature_input) return {polyline_from_curvature(io::read_values(in)), cfg.input, false};
  return {io::read_polyline(in), cfg.input, false};
}

// Resolves --family against the balance report ("auto" takes the first subset).
std::optional<std::vector<std::size_t>> chosen_subset(const RunConfig& cfg, const BalanceReport& report) {
  if (cfg.family.empty()) return std::nullopt;
  if (cfg.family == "auto") {
    if (report.subsets.empty()) throw CheckFailed("--family auto: the polyline has no balanced subset");
    return report.subsets.front().indices;
  }
  return parse_subset(cfg.family);
}

}  // namespace

int cmd_construct(const RunConfig& cfg, std::ostream& out) {
  const int m = cfg.gap_modulus;
  std::optional<GappedTrigCurve> curve;
  bool random = false;
  if (cfg.curve == "circle") {
    curve = circle_curve(1.0, m);
  } else if (!cfg.curve.empty()) {
    auto in = open_input(cfg.curve);
    curve = make_gapped_curve(m, io::read_coefficients(in));
  } else {
    curve = make_gapped_curve(cfg.degree, m, cfg.seed);
    random = true;
  }
  const auto g = Generator::parse(cfg.generator);
  const int harmonic = cfg.harmonic.value_or(m);
  const auto map = arclength_map(*curve, cfg.grid);
  const auto opts = verify_options(cfg, lambdas(cfg, {-5.0, 5.0, 0.5}));

  out << "curve degree=" << curve->degree() << " gap_modulus=" << m;
  if (random) out << " seed=" << cfg.seed;
  out << " length=" << format_real(map.total_length) << '\n';
  out << "pair grid=" << cfg.grid << " harmonic=" << harmonic << " generator=" << g.describe() << '\n';

  try {
    auto pair = build_pair(*curve, map, harmonic, g, opts);
    if (random) pair.provenance.seed = cfg.seed;
    const auto v = verify_pair(pair, opts);
    out << "scan max_defect=" << format_real(v.scan.max_defect) << " tolerance=" << format_real(opts.scan_tolerance)
        << '\n';
    out << "moments max_normalized=" << format_real(v.max_moment) << " tolerance=" << format_real(opts.moment_tolerance)
        << '\n';
    const std::string path = cfg.out.empty() ? "pair.txt" : cfg.out;
    write_file(path, to_text([&](std::ostream& s) { io::write_pair(s, pair); }));
    out << "wrote " << path << '\n';
    out << "verdict pass\n";
    return kPass;
  } catch (const ConstructionError& e) {
    const auto& p = e.profile();
    out << "scan max_defect=" << format_real(p.scan.max_defect) << " tolerance=" << format_real(opts.scan_tolerance)
        << '\n';
    for (std::size_t i = 0; i < p.scan.lambda_values.size(); ++i) {
      out << "  lambda=" << format_real(p.scan.lambda_values[i]) << " defect=" << format_real(p.scan.defects[i])
          << '\n';
    }
    out << "moments max_normalized=" << format_real(p.max_moment) << " tolerance=" << format_real(opts.moment_tolerance)
        << '\n';
    out << "verdict fail (" << e.what() << ")\n";
    return kCheckFailure;
  }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto pair = load_pair(cfg.input);
  const auto opts = verify_options(cfg, lambdas(cfg, {-5.0, 5.0, 0.5}));
  const fs::path dir = cfg.out.empty() ? fs::path("reports") : fs::path(cfg.out);
  const auto theta = turning_angle(pair.k);
  const auto phi = turning_angle(pair.f);
  const double origin = pair.provenance.phi_origin;
  bool all_pass = true;

  const auto scan = family_scan_angles(theta, phi, opts.lambdas, opts.scan_tolerance);
  write_file(dir / "scan.csv", to_text([&](std::ostream& s) { io::write_csv(s, scan); }));
  out << "scan max_defect=" << format_real(scan.max_defect) << " tolerance=" << format_real(scan.tolerance) << ' '
      << verdict(scan.pass) << '\n';
  all_pass &= scan.pass;

  const MomentOptions mopts{std::max(24, cfg.max_moment)};
  double worst = 0.0;
  std::ostringstream moments;
  moments << "n,re,im,normalized\n";
  for (int n = 0; n <= cfg.max_moment; ++n) {
    const auto m = moment(theta, phi, n, mopts);
    const double nm = normalized_moment(theta, phi, n, mopts);
    worst = std::max(worst, nm);
    moments << n << ',' << format_real(m.real()) << ',' << format_real(m.imag()) << ',' << format_real(nm) << '\n';
  }
  write_file(dir / "moments.csv", moments.str());
  const bool moments_pass = worst <= cfg.moment_tol;
  out << "moments max_normalized=" << format_real(worst) << " tolerance=" << format_real(cfg.moment_tol) << ' '
      << verdict(moments_pass) << '\n';
  all_pass &= moments_pass;

  // Levels at interior fractions of the range of phi; critical and boundary
  // values are skipped. The weighted sum is compared relative to the total
  // weight sum 1/|phi'| when that exceeds one.
  const auto [lo, hi] = std::minmax_element(phi.values().begin(), phi.values().end());
  int checked = 0, skipped = 0;
  double worst_level = 0.0;
  bool levels_pass = true;
  if (*hi > *lo) {
    for (int i = 1; i <= 9; ++i) {
      const double a = *lo + (*hi - *lo) * i / 10.0;
      try {
        const auto rep = level_set_condition(theta, phi, a);
        if (!rep.boundary_excluded) {
          ++skipped;
          continue;
        }
        double weight = 0.0;
        for (const auto& r : rep.roots) weight += 1.0 / r.abs_phi_prime;
        const double rel = std::abs(rep.weighted_sum) / std::max(1.0, weight);
        worst_level = std::max(worst_level, rel);
        levels_pass &= rel <= cfg.level_tol;
        ++checked;
        char name[32];
        std::snprintf(name, sizeof name, "level_%d.csv", i);
        write_file(dir / name, to_text([&](std::ostream& s) { io::write_csv(s, rep); }));
        out << "  level " << format_real(origin + a) << " roots=" << rep.roots.size()
            << " weighted_sum=" << format_real(std::abs(rep.weighted_sum)) << '\n';
      } catch (const CriticalValue&) {
        ++skipped;
      }
    }
  }
  out << "levels checked=" << checked << " skipped=" << skipped << " max_relative=" << format_real(worst_level)
      << " tolerance=" << format_real(cfg.level_tol) << ' ' << verdict(levels_pass) << '\n';
  all_pass &= levels_pass;

  try {
    const auto b = boundary_check(theta, phi, cfg.boundary_order, cfg.boundary_tol);
    const bool ok = b.branch != BoundaryBranch::Violation;
    double res = 0.0;
    for (double r : b.derivative_residuals) res = std::max(res, r);
    out << "boundary branch=" << to_string(b.branch) << " theta_gap=" << format_real(b.theta_gap)
        << " max_residual=" << format_real(res) << ' ' << verdict(ok) << '\n';
    all_pass &= ok;
  } catch (const CriticalValue&) {
    out << "boundary skipped (phi(0) is a critical value of phi)\n";
  }

  out << "reports " << dir.string() << '\n';
  out << "verdict " << verdict(all_pass) << '\n';
  return all_pass ? kPass : kCheckFailure;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const auto pair = load_pair(cfg.input);
  const auto scan = family_scan(pair.k, pair.f, lambdas(cfg, {-5.0, 5.0, 0.5}), cfg.tol.value_or(kSmoothTolerance));
  const auto csv = to_text([&](std::ostream& s) { io::write_csv(s, scan); });
  if (cfg.out.empty()) {
    out << csv;
  } else {
    write_file(cfg.out, csv);
    out << "scan max_defect=" << format_real(scan.max_defect) << " tolerance=" << format_real(scan.tolerance) << ' '
        << verdict(scan.pass) << '\n';
  }
  return scan.pass ? kPass : kCheckFailure;
}

int cmd_discrete(const RunConfig& cfg, std::ostream& out) {
  const auto input = load_discrete(cfg);
  const double tol = cfg.tol.value_or(kDiscreteTolerance);
  const auto angles = DiscreteAngles::from_polyline(input.polyline);
  const double defect = discrete_closure_defect(input.polyline);
  bool all_pass = true;

  out << "polyline " << input.origin << " vertices=" << input.polyline.size() << '\n';
  out << "closure_defect " << format_real(defect) << '\n';

  BalanceOptions bopts;
  bopts.tolerance = tol;
  bopts.cap = cfg.subset_cap;
  const auto report = find_balanced_subsets(angles, bopts);
  const auto json = io::balance_report_json(report);
  out << "balanced_subsets " << report.subsets.size() << " near_balanced " << report.near_balanced.size() << '\n';
  for (const auto& s : report.subsets) {
    out << "  " << subset_text(s.indices) << " residual=" << format_real(s.residual) << '\n';
  }
  if (input.generated) {
    const bool ok = defect <= 1e-12 && report.subsets.empty();
    out << "no_balanced_check " << verdict(ok) << '\n';
    all_pass &= ok;
  }

  std::optional<ClosureReport> scan;
  std::optional<DiscretePhi> phi;
  if (const auto subset = chosen_subset(cfg, report)) {
    phi = build_discrete_family(angles, *subset, cfg.amplitude, tol);
    scan = discrete_family_scan(angles, *phi, lambdas(cfg, {-10.0, 10.0, 1.0}), tol);
    out << "family subset=" << subset_text(*subset) << " amplitude=" << format_real(cfg.amplitude) << '\n';
    out << "scan max_defect=" << format_real(scan->max_defect) << " tolerance=" << format_real(tol) << ' '
        << verdict(scan->pass) << '\n';
    all_pass &= scan->pass;
  }

  if (!cfg.out.empty()) {
    const fs::path dir(cfg.out);
    write_file(dir / "polyline.txt", to_text([&](std::ostream& s) { io::write_polyline(s, input.polyline); }));
    write_file(dir / "balance.json", json);
    if (scan) {
      write_file(dir / "phi.txt", to_text([&](std::ostream& s) { io::write_values(s, phi->partial_sums()); }));
      write_file(dir / "scan.csv", to_text([&](std::ostream& s) { io::write_csv(s, *scan); }));
    }
    out << "reports " << dir.string() << '\n';
  } else {
    out << json;
  }
  out << "verdict " << verdict(all_pass) << '\n';
  return all_pass ? kPass : kCheckFailure;
}

int cmd_render(const RunConfig& cfg, std::ostream& out) {
  const auto lams = lambdas(cfg, {0.0, 0.7, 0.1});
  std::vector<SvgFrame> frames(lams.size());

  if (!cfg.no_balanced.empty() || !is_pair_file(cfg.input)) {
    const auto input = load_discrete(cfg);
    const double tol = cfg.tol.value_or(kDiscreteTolerance);
    const auto angles = DiscreteAngles::from_polyline(input.polyline);
    std::vector<bool> moving(angles.vertex_count(), false);  // by edge index, 1-based
    std::vector<double> phi(angles.interior(), 0.0);
    if (!cfg.family.empty()) {
      BalanceOptions bopts;
      bopts.tolerance = tol;
      bopts.cap = cfg.subset_cap;
      const auto subset = cfg.family == "auto" ? chosen_subset(cfg, find_balanced_subsets(angles, bopts))
                                               : std::optional(parse_subset(cfg.family));
      const auto fam = build_discrete_family(angles, *subset, cfg.amplitude, tol);
      phi = fam.partial_sums();
      for (std::size_t j : *subset) moving[j] = true;
      if (!cfg.force) {
        const auto scan = discrete_family_scan(angles, fam, lams, tol);
        if (!scan.pass) {
          throw CheckFailed("family fails verification (max defect " + format_real(scan.max_defect) +
                            "); pass --force to render anyway");
        }
      }
    } else if (!cfg.force && discrete_closure_defect(input.polyline) > tol) {
      throw CheckFailed("polyline is not closed (defect " + format_real(discrete_closure_defect(input.polyline)) +
                        "); pass --force to render anyway");
    }
    parallel_for(lams.size(), [&](std::size_t i) {
      std::vector<double> th = angles.turning();
      for (std::size_t j = 0; j < th.size(); ++j) th[j] += lams[i] * phi[j];
      const auto p = polyline_from_angles(DiscreteAngles::from_turning(th));
      const auto& v = p.vertices();
      SvgFrame f;
      f.title = title_for(lams[i]);
      Path run{v[0]};
      for (std::size_t e = 1; e < v.size(); ++e) {
        if (moving[e]) {
          if (run.size() > 1) f.solid.push_back(run);
          f.dashed.push_back({v[e - 1], v[e]});
          run = {v[e]};
        } else {
          run.push_back(v[e]);
        }
      }
      if (run.size() > 1) f.solid.push_back(run);
      frames[i] = std::move(f);
    });
  } else {
    const auto pair = load_pair(cfg.input);
    if (!cfg.force) {
      const auto v = verify_pair(pair, verify_options(cfg, lams));
      if (!v.pass) {
        throw CheckFailed("pair fails verification (max defect " + format_real(v.scan.max_defect) + ", max moment " +
                          format_real(v.max_moment) + "); pass --force to render anyway");
      }
    }
    const auto theta = turning_angle(pair.k);
    const auto phi = turning_angle(pair.f);
    parallel_for(lams.size(), [&](std::size_t i) {
      std::vector<double> th(theta.size());
      for (std::size_t j = 0; j < th.size(); ++j) th[j] = theta[j] + lams[i] * phi[j];
      const auto pts = curve_from_angle(SampledFunction(theta.grid(), std::move(th))).points;
      frames[i] = SvgFrame{{decimate(pts)}, {}, title_for(lams[i])};
    });
  }

  SvgStyle style;
  style.stroke_width = cfg.stroke_width;
  const auto view = fit(frames);
  if (cfg.columns > 0) {
    const std::string path = cfg.out.empty() ? "montage.svg" : cfg.out;
    write_file(path, render_montage(frames, cfg.columns, view, style));
    out << "wrote " << path << " frames=" << frames.size() << '\n';
  } else {
    const fs::path dir = cfg.out.empty() ? fs::path("frames") : fs::path(cfg.out);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%03zu.svg", i);
      write_file(dir / name, render_frame(frames[i], view, style));
    }
    out << "wrote " << frames.size() << " frames to " << dir.string() << '\n';
  }
  return kPass;
}

}  // namespace curvfam::cli
