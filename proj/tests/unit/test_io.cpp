#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "curvfam/errors.hpp"
#include "curvfam/io.hpp"
#include "oracles.hpp"

using namespace curvfam;

namespace {

FamilyPair degree_three_pair() {
  const auto curve = make_gapped_curve(3, 4, 7);
  auto pair = build_pair(curve, arclength_map(curve, 1024), 4, Generator::parse("exp+2x"));
  pair.provenance.seed = 7;
  return pair;
}

template <class Fn>
std::size_t parse_error_line(const std::string& text, Fn&& reader) {
  std::istringstream in(text);
  try {
    reader(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(FormatReal, SeventeenDigits) {
  EXPECT_EQ(io::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_real(2.0), "2");
  EXPECT_EQ(std::stod(io::format_real(oracle::kPi)), oracle::kPi);
}

TEST(PairFile, RoundTripIsExact) {
  const auto pair = degree_three_pair();
  std::ostringstream out;
  io::write_pair(out, pair);
  std::istringstream in(out.str());
  const auto back = io::read_pair(in);
  ASSERT_EQ(back.k.size(), pair.k.size());
  for (std::size_t j = 0; j < pair.k.size(); ++j) {
    EXPECT_EQ(back.k[j], pair.k[j]);
    EXPECT_EQ(back.f[j], pair.f[j]);
  }
  EXPECT_EQ(back.provenance.gap_modulus, 4);
  EXPECT_EQ(back.provenance.harmonic, 4);
  EXPECT_EQ(back.provenance.seed, std::optional<std::uint64_t>(7));
  EXPECT_EQ(back.provenance.phi_origin, pair.provenance.phi_origin);
  ASSERT_TRUE(back.provenance.source);
  EXPECT_EQ(back.provenance.source->coefficients().a, pair.provenance.source->coefficients().a);
  std::ostringstream again;
  io::write_pair(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(PairFile, ErrorsCarryLineNumbers) {
  const auto read = [](std::istream& in) { io::read_pair(in); };
  EXPECT_EQ(parse_error_line("not-a-pair\n", read), 1u);
  EXPECT_EQ(parse_error_line("curvfam-pair 1\n# comment\ngrid 16\nbogus 3\n", read), 4u);
  std::string text = "curvfam-pair 1\ngrid 16\nk\n";
  for (int j = 0; j < 16; ++j) text += "1\n";
  text += "f\n0\n0\nabc\n";
  EXPECT_EQ(parse_error_line(text, read), 23u);
}

TEST(PairFile, MissingBlockRejected) {
  std::string text = "curvfam-pair 1\ngrid 16\nk\n";
  for (int j = 0; j < 16; ++j) text += "1\n";
  std::istringstream in(text);
  EXPECT_THROW(io::read_pair(in), ParseError);
}

TEST(PolylineFile, RoundTripAndValidation) {
  const auto p = polyline_from_curvature(std::vector<double>(5, oracle::kPi / 3));
  std::ostringstream out;
  io::write_polyline(out, p);
  std::istringstream in(out.str());
  const auto back = io::read_polyline(in);
  ASSERT_EQ(back.size(), p.size());
  for (std::size_t j = 1; j <= p.size(); ++j) EXPECT_EQ(back.vertex(j), p.vertex(j));

  std::istringstream bad("0 0\n1 0\n1 2\n");
  EXPECT_THROW(io::read_polyline(bad), ParseError);
  EXPECT_EQ(parse_error_line("0 0\n1 0\nx y\n", [](std::istream& s) { io::read_polyline(s); }), 3u);
}

TEST(CoefficientFile, RoundTrip) {
  const auto curve = make_gapped_curve(5, 3, 21);
  std::ostringstream out;
  io::write_coefficients(out, curve);
  std::istringstream in(out.str());
  const auto c = io::read_coefficients(in);
  EXPECT_EQ(c.a, curve.coefficients().a);
  EXPECT_EQ(c.b, curve.coefficients().b);
  EXPECT_EQ(c.abar, curve.coefficients().abar);
  EXPECT_EQ(c.bbar, curve.coefficients().bbar);
  EXPECT_EQ(parse_error_line("0 0 0 0 0\n2 1 0 0 1\n", [](std::istream& s) { io::read_coefficients(s); }), 2u);
}

TEST(ValuesFile, RoundTrip) {
  const std::vector<double> v = {0.1, -2.5e-300, 1e300, 0.0};
  std::ostringstream out;
  io::write_values(out, v);
  std::istringstream in(out.str());
  EXPECT_EQ(io::read_values(in), v);
}

TEST(Csv, ClosureReportLayout) {
  const auto r = ClosureReport::make({-0.5, 0.5}, {0.25, 1e-20}, 1e-7);
  std::ostringstream out;
  io::write_csv(out, r);
  EXPECT_EQ(out.str(), "lambda,defect\n-0.5,0.25\n0.5,9.9999999999999995e-21\n");
}

TEST(BalanceJson, HexagonReport) {
  const auto r = find_balanced_subsets(DiscreteAngles::from_curvature(std::vector<double>(5, oracle::kPi / 3)));
  const auto j = nlohmann::json::parse(io::balance_report_json(r));
  EXPECT_EQ(j["tolerance"].get<double>(), 1e-9);
  EXPECT_TRUE(j["exhaustive"].get<bool>());
  ASSERT_EQ(j["subsets"].size(), 4u);
  EXPECT_EQ(j["subsets"][0]["indices"], nlohmann::json::array({2, 5}));
  EXPECT_TRUE(j["near_balanced"].empty());
}
