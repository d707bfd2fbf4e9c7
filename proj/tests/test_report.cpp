#include <gtest/gtest.h>

#include <sstream>

#include "hybridpulse/backend.hpp"
#include "hybridpulse/error.hpp"
#include "hybridpulse/report.hpp"
#include "testutil.hpp"

using namespace hybridpulse;

namespace {

ExperimentResult fake_run(ModelKind model, const std::string& variant, double ar, double ar_m3 = -1.0) {
  ExperimentResult r;
  r.config.graph = hptest::triangle();
  r.config.model = model;
  r.config.profile = find_profile("toronto");
  r.config.max_iter = 10;
  r.variant = variant;
  r.ar_raw = ar;
  if (ar_m3 >= 0.0) r.ar_mitigated = ar_m3;
  r.stats.mixer_duration_dt = model == ModelKind::Gate ? 320 : 160;
  for (int i = 0; i < 10; ++i) r.opt.history.push_back({{0.1 * i}, -1.0 - 0.1 * ((i * 7) % 5)});
  r.opt.n_evals = r.opt.history.size();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Report, ShapeAndAveraging) {
  std::vector<ExperimentResult> runs = {fake_run(ModelKind::Gate, "raw", 0.6), fake_run(ModelKind::Gate, "raw", 0.8),
                                        fake_run(ModelKind::Hybrid, "CVaR", 0.9),
                                        fake_run(ModelKind::Hybrid, "M3", 0.5, 0.7)};
  DurationSearchResult ds;
  ds.backend = "toronto";
  ds.min_duration = 96;
  const auto t = build_report(runs, {ds});
  ASSERT_EQ(t.columns.size(), 2u);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.columns[0], "toronto (gate)");
  EXPECT_NEAR(*t.cells[0][0], 0.7, 1e-12);
  EXPECT_FALSE(t.cells[1][0].has_value());
  EXPECT_NEAR(*t.cells[2][1], 0.7, 1e-12);  // M3 cell uses the mitigated AR
  EXPECT_NEAR(*t.cells[3][1], 0.9, 1e-12);
  EXPECT_EQ(*t.cells[4][0], 320);
  EXPECT_EQ(*t.cells[4][1], 160);
  EXPECT_FALSE(t.cells[5][0].has_value());
  EXPECT_EQ(*t.cells[5][1], 96);
}

TEST(Report, EmptyInputThrows) { EXPECT_THROW(build_report({}), InputError); }

TEST(Report, UnknownVariantThrows) {
  EXPECT_THROW(build_report({fake_run(ModelKind::Gate, "bogus", 0.5)}), InputError);
}

TEST(Report, Csv) {
  const auto t = build_report({fake_run(ModelKind::Gate, "raw", 0.75)});
  const auto l = lines(t.to_csv());
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0], kReportCsvHeader);
  EXPECT_EQ(l[1], "metric,toronto (gate)");
  EXPECT_EQ(l[2], "Raw AR,0.75");
  EXPECT_EQ(l[3], "GO AR,");
  EXPECT_EQ(l[6], "Raw Mixer Layer Duration,320");
}

TEST(Report, Markdown) {
  const auto md = build_report({fake_run(ModelKind::Hybrid, "raw", 0.5)}).to_markdown();
  const auto l = lines(md);
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0], "| Backends | toronto (hybrid) |");
  EXPECT_EQ(l[1], "|---|---|");
  EXPECT_EQ(l[2], "| Raw AR | 50% |");
  EXPECT_EQ(l[3], "| GO AR | - |");
  EXPECT_EQ(l[6], "| Raw Mixer Layer Duration | 160dt |");
}

TEST(Report, ConvergenceCsv) {
  const auto r = fake_run(ModelKind::Gate, "raw", 0.5);
  const auto l = lines(convergence_csv(r));
  EXPECT_EQ(l[0], kConvergenceCsvHeader);
  EXPECT_EQ(l[1], "eval,cost,best_cost");
  ASSERT_EQ(l.size(), 2 + r.opt.history.size());
  ASSERT_LE(l.size() - 2, static_cast<std::size_t>(*r.config.max_iter) + 1);
  double best = 1e300;
  for (std::size_t i = 2; i < l.size(); ++i) {
    std::istringstream in(l[i]);
    std::string a, b, c;
    std::getline(in, a, ',');
    std::getline(in, b, ',');
    std::getline(in, c, ',');
    EXPECT_EQ(std::stoul(a), i - 1);
    best = std::min(best, std::stod(b));
    EXPECT_DOUBLE_EQ(std::stod(c), best);
  }
}
