#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "conemin/phase_scan.hpp"

using namespace conemin;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) {
    out.push_back(l);
  }
  return out;
}

} // namespace

TEST(Threshold, Examples) {
  EXPECT_EQ(threshold(2), 1.0);
  EXPECT_NEAR(threshold(3), 0.9428090, 1e-7);
  EXPECT_NEAR(threshold(5), 0.8, 1e-15);
  EXPECT_THROW(threshold(1), std::domain_error);
}

TEST(Decide, Examples) {
  auto a = decide(ConeSpace(3, 0.95), DecideMode::certified);
  EXPECT_EQ(a.verdict, Verdict::minimizing);
  EXPECT_EQ(a.certificate, Certificate::barrier_line);
  EXPECT_GT(a.margin, 0.0L);

  auto b = decide(ConeSpace(3, 0.90), DecideMode::certified);
  EXPECT_EQ(b.verdict, Verdict::not_minimizing);
  EXPECT_EQ(b.certificate, Certificate::competitor_found);
  EXPECT_GT(b.margin, 0.0L);

  EXPECT_EQ(decide(ConeSpace(2, 0.99), DecideMode::certified).verdict, Verdict::not_minimizing);
  EXPECT_EQ(decide(ConeSpace(2, 0.99), DecideMode::formula_only).verdict,
            Verdict::not_minimizing);
}

TEST(Decide, TieIsMinimizing) {
  const auto d = decide(ConeSpace(2, 1.0), DecideMode::certified);
  EXPECT_EQ(d.verdict, Verdict::minimizing);
  EXPECT_EQ(d.certificate, Certificate::barrier_line);
  EXPECT_EQ(decide(ConeSpace(5, 0.8), DecideMode::formula_only).verdict, Verdict::minimizing);
}

TEST(Scan, EmptyGrid) {
  EXPECT_TRUE(scan({3}, {}).empty());
  EXPECT_TRUE(scan({}, {0.5}).empty());
}

TEST(Scan, FormulaThresholds) {
  ScanConfig cfg;
  cfg.mode = DecideMode::formula_only;
  const auto recs = scan({2, 3, 4, 5, 6}, linspace(0.7, 1.0, 301), cfg);
  const double expect[] = {1.0, 0.94281, 0.86603, 0.8, 0.74536};
  for (int n = 2; n <= 6; ++n) {
    EXPECT_NEAR(recs[(n - 2) * 301].lambda_star, expect[n - 2], 1e-5);
    EXPECT_TRUE(verdicts_monotone(recs, n));
    if (n > 2) {
      const auto t = empirical_threshold(recs, n);
      ASSERT_TRUE(t);
      EXPECT_NEAR(*t, threshold(n), 1e-3);
    }
  }
}

TEST(Scan, CertifiedNearThresholdForNThree) {
  const auto recs = scan({3}, linspace(0.90, 0.99, 2001));
  const auto t = empirical_threshold(recs, 3);
  ASSERT_TRUE(t);
  EXPECT_NEAR(*t, 0.942809, 1e-3);
  EXPECT_TRUE(verdicts_monotone(recs, 3));
}

TEST(Scan, ModesAgreeAwayFromThreshold) {
  ScanConfig formula;
  formula.mode = DecideMode::formula_only;
  const std::vector<int> ns{2, 3, 4, 5, 6};
  const auto grid = linspace(0.5, 1.0, 251);
  const auto cert = scan(ns, grid);
  const auto form = scan(ns, grid, formula);
  ASSERT_EQ(cert.size(), form.size());
  for (std::size_t i = 0; i < cert.size(); ++i) {
    if (std::abs(cert[i].lambda - cert[i].lambda_star) > 2e-3) {
      EXPECT_EQ(cert[i].decision.verdict, form[i].decision.verdict)
          << "n=" << cert[i].n << " lambda=" << cert[i].lambda;
    }
  }
}

TEST(Scan, SortedAndDeterministicAcrossJobs) {
  ScanConfig one;
  one.jobs = 1;
  ScanConfig four;
  four.jobs = 4;
  const auto grid = linspace(0.7, 0.99, 97);
  const auto a = scan({6, 3, 4}, grid, one);
  const auto b = scan({6, 3, 4}, grid, four);
  ASSERT_EQ(a, b);
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_TRUE(a[i - 1].n < a[i].n || (a[i - 1].n == a[i].n && a[i - 1].lambda < a[i].lambda));
  }
  std::ostringstream x;
  std::ostringstream y;
  emit(a, OutputFormat::csv, x);
  emit(b, OutputFormat::csv, y);
  EXPECT_EQ(x.str(), y.str());
}

TEST(Emit, CsvOneRecord) {
  const auto recs = scan({3}, {0.95});
  std::ostringstream out;
  emit(recs, OutputFormat::csv, out);
  const auto ls = lines(out.str());
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "# cone-min-lab v1");
  EXPECT_EQ(ls[1], "n,lambda,verdict,certificate,margin,lambda_star,wall_time_ms");
  EXPECT_EQ(ls[2].rfind("3,0.9499", 0), 0u);
  EXPECT_NE(ls[2].find("Minimizing,BarrierLine"), std::string::npos);
}

TEST(Emit, JsonRoundTrip) {
  auto recs = scan({2, 5}, linspace(0.75, 0.85, 11));
  recs.front().decision.diagnostics = "quote \" and\nnewline";
  std::stringstream buf;
  emit(recs, OutputFormat::json, buf);
  const auto back = parse_json(buf);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i], recs[i]);
    EXPECT_EQ(back[i].decision.diagnostics, recs[i].decision.diagnostics);
  }
  std::istringstream junk("{\"n\": 3}");
  EXPECT_THROW(parse_json(junk), io_error);
}

TEST(Emit, SvgIsStandalone) {
  ScanConfig cfg;
  cfg.mode = DecideMode::formula_only;
  const auto recs = scan({2, 3, 4, 5, 6}, linspace(0.7, 1.0, 31), cfg);
  std::ostringstream out;
  emit(recs, OutputFormat::svg, out);
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg xmlns"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  std::size_t dots = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) {
    ++dots;
  }
  EXPECT_GE(dots, recs.size());
}

TEST(Emit, UnwritablePath) {
  EXPECT_THROW(emit({}, OutputFormat::csv, std::string("/nonexistent-dir/x.csv")), io_error);
  const auto path = std::filesystem::temp_directory_path() / "cone_min_lab_emit.csv";
  emit(scan({3}, {0.95}), OutputFormat::csv, path.string());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "# cone-min-lab v1");
  std::filesystem::remove(path);
}
