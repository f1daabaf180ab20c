#include "curvfam/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "curvfam/errors.hpp"

namespace curvfam::io {

namespace {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  // Next non-blank, non-comment line with surrounding whitespace removed.
  std::optional<std::string> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      return line.substr(first, last - first + 1);
    }
    return std::nullopt;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_no); }
};

std::vector<std::string> split(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

double parse_real(const std::string& tok, const LineReader& r) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(v)) {
    r.fail("expected a finite number, got '" + tok + "'");
  }
  return v;
}

long long parse_integer(const std::string& tok, const LineReader& r) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE) {
    r.fail("expected an integer, got '" + tok + "'");
  }
  return v;
}

std::vector<double> read_block(LineReader& r, std::size_t n, const char* name) {
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    auto line = r.next();
    if (!line) {
      r.fail(std::string("'") + name + "' block ends after " + std::to_string(out.size()) + " of " +
             std::to_string(n) + " values");
    }
    const auto toks = split(*line);
    if (toks.size() != 1) r.fail(std::string("expected one value per line in '") + name + "' block");
    out.push_back(parse_real(toks[0], r));
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const SampledFunction& fun) {
  out << "t,value\n";
  for (std::size_t j = 0; j < fun.size(); ++j) {
    out << format_real(fun.grid().node(j)) << ',' << format_real(fun[j]) << '\n';
  }
}

void write_csv(std::ostream& out, const ClosureReport& report) {
  out << "lambda,defect\n";
  for (std::size_t i = 0; i < report.lambda_values.size(); ++i) {
    out << format_real(report.lambda_values[i]) << ',' << format_real(report.defects[i]) << '\n';
  }
}

void write_csv(std::ostream& out, const LevelSetReport& report) {
  out << "root,theta_at_root,abs_phi_prime,partial_sum_re,partial_sum_im\n";
  const auto partial = report.partial_sums();
  for (std::size_t i = 0; i < report.roots.size(); ++i) {
    const auto& r = report.roots[i];
    out << format_real(r.t) << ',' << format_real(r.theta) << ',' << format_real(r.abs_phi_prime) << ','
        << format_real(partial[i].real()) << ',' << format_real(partial[i].imag()) << '\n';
  }
}

void write_pair(std::ostream& out, const FamilyPair& pair) {
  const auto& p = pair.provenance;
  out << "curvfam-pair 1\n";
  out << "grid " << pair.k.size() << '\n';
  if (p.gap_modulus != 0) out << "gap_modulus " << p.gap_modulus << '\n';
  if (p.harmonic != 0) out << "harmonic " << p.harmonic << '\n';
  out << "generator " << p.generator << '\n';
  if (p.seed) out << "seed " << *p.seed << '\n';
  out << "phi_origin " << format_real(p.phi_origin) << '\n';
  if (!p.note.empty()) out << "note " << p.note << '\n';
  if (p.source) {
    const auto& c = p.source->coefficients();
    for (std::size_t j = 0; j < c.a.size(); ++j) {
      out << "coefficient " << j << ' ' << format_real(c.a[j]) << ' ' << format_real(c.b[j]) << ' '
          << format_real(c.abar[j]) << ' ' << format_real(c.bbar[j]) << '\n';
    }
  }
  out << "k\n";
  for (double v : pair.k.values()) out << format_real(v) << '\n';
  out << "f\n";
  for (double v : pair.f.values()) out << format_real(v) << '\n';
}

FamilyPair read_pair(std::istream& in) {
  LineReader r{in};
  auto header = r.next();
  if (!header || split(*header) != std::vector<std::string>{"curvfam-pair", "1"}) {
    r.fail("expected header 'curvfam-pair 1'");
  }

  std::optional<std::size_t> grid_size;
  std::optional<std::vector<double>> k, f;
  Provenance prov;
  GappedTrigCurve::Coefficients coeffs;

  while (auto line = r.next()) {
    const auto space = line->find_first_of(" \t");
    const std::string key = line->substr(0, space);
    const std::string rest =
        space == std::string::npos ? std::string{} : line->substr(line->find_first_not_of(" \t", space));
    const auto toks = split(rest);

    if (key == "k" || key == "f") {
      if (!grid_size) r.fail("'grid' must precede the sample blocks");
      if (!toks.empty()) r.fail("'" + key + "' takes no value; samples follow one per line");
      auto& slot = (key == "k") ? k : f;
      if (slot) r.fail("duplicate '" + key + "' block");
      slot = read_block(r, *grid_size, key.c_str());
      continue;
    }
    if (key == "generator" || key == "note") {
      if (rest.empty()) r.fail("'" + key + "' needs a value");
      (key == "generator" ? prov.generator : prov.note) = rest;
      continue;
    }
    if (key == "coefficient") {
      if (toks.size() != 5) r.fail("'coefficient' needs j a b abar bbar");
      const auto j = parse_integer(toks[0], r);
      if (j != static_cast<long long>(coeffs.a.size())) r.fail("coefficient rows must run j = 0, 1, ...");
      coeffs.a.push_back(parse_real(toks[1], r));
      coeffs.b.push_back(parse_real(toks[2], r));
      coeffs.abar.push_back(parse_real(toks[3], r));
      coeffs.bbar.push_back(parse_real(toks[4], r));
      continue;
    }
    if (toks.size() != 1) r.fail("'" + key + "' needs exactly one value");
    if (key == "grid") {
      const auto n = parse_integer(toks[0], r);
      if (n < 16) r.fail("grid must have at least 16 samples");
      grid_size = static_cast<std::size_t>(n);
    } else if (key == "gap_modulus") {
      prov.gap_modulus = static_cast<int>(parse_integer(toks[0], r));
    } else if (key == "harmonic") {
      prov.harmonic = static_cast<int>(parse_integer(toks[0], r));
    } else if (key == "seed") {
      const auto s = parse_integer(toks[0], r);
      if (s < 0) r.fail("seed must be non-negative");
      prov.seed = static_cast<std::uint64_t>(s);
    } else if (key == "phi_origin") {
      prov.phi_origin = parse_real(toks[0], r);
    } else {
      r.fail("unknown key '" + key + "'");
    }
  }

  if (!k || !f) throw ParseError("pair file lacks a 'k' or 'f' block", r.line_no);
  if (!coeffs.a.empty()) {
    try {
      prov.source = GappedTrigCurve(prov.gap_modulus, std::move(coeffs));
    } catch (const ValidationError& e) {
      throw ParseError(std::string("invalid curve coefficients: ") + e.what(), r.line_no);
    }
  }
  const UniformGrid grid(*grid_size);
  return {SampledFunction(grid, std::move(*k)), SampledFunction(grid, std::move(*f)), std::move(prov)};
}

void write_coefficients(std::ostream& out, const GappedTrigCurve& curve) {
  const auto& c = curve.coefficients();
  out << "# j a b abar bbar\n";
  for (std::size_t j = 0; j < c.a.size(); ++j) {
    out << j << ' ' << format_real(c.a[j]) << ' ' << format_real(c.b[j]) << ' ' << format_real(c.abar[j]) << ' '
        << format_real(c.bbar[j]) << '\n';
  }
}

GappedTrigCurve::Coefficients read_coefficients(std::istream& in) {
  LineReader r{in};
  GappedTrigCurve::Coefficients c;
  while (auto line = r.next()) {
    const auto toks = split(*line);
    if (toks.size() != 5) r.fail("expected 'j a b abar bbar'");
    if (parse_integer(toks[0], r) != static_cast<long long>(c.a.size())) r.fail("rows must run j = 0, 1, ...");
    c.a.push_back(parse_real(toks[1], r));
    c.b.push_back(parse_real(toks[2], r));
    c.abar.push_back(parse_real(toks[3], r));
    c.bbar.push_back(parse_real(toks[4], r));
  }
  if (c.a.empty()) throw ParseError("no coefficient rows", r.line_no);
  return c;
}

void write_polyline(std::ostream& out, const Polyline& p) {
  for (const auto& v : p.vertices()) out << format_real(v.real()) << ' ' << format_real(v.imag()) << '\n';
}

Polyline read_polyline(std::istream& in) {
  LineReader r{in};
  std::vector<std::complex<double>> v;
  while (auto line = r.next()) {
    const auto toks = split(*line);
    if (toks.size() != 2) r.fail("expected 'x y'");
    v.emplace_back(parse_real(toks[0], r), parse_real(toks[1], r));
  }
  try {
    return Polyline(std::move(v));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), r.line_no);
  }
}

void write_values(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) out << format_real(v) << '\n';
}

std::vector<double> read_values(std::istream& in) {
  LineReader r{in};
  std::vector<double> out;
  while (auto line = r.next()) {
    const auto toks = split(*line);
    if (toks.size() != 1) r.fail("expected one value per line");
    out.push_back(parse_real(toks[0], r));
  }
  return out;
}

std::string balance_report_json(const BalanceReport& report) {
  const auto subsets = [](const std::vector<BalancedSubset>& list) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : list) arr.push_back({{"indices", s.indices}, {"residual", s.residual}});
    return arr;
  };
  nlohmann::ordered_json j;
  j["tolerance"] = report.tolerance;
  j["exhaustive"] = report.exhaustive;
  j["subsets"] = subsets(report.subsets);
  j["near_balanced"] = subsets(report.near_balanced);
  return j.dump(2) + "\n";
}

}  // namespace curvfam::io
