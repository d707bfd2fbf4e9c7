#include "hybridpulse/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

namespace {

const std::vector<std::string> kArRows = {"Raw AR", "GO AR", "M3 AR", "CVaR AR"};
const std::vector<std::string> kVariants = {"raw", "GO", "M3", "CVaR"};
const std::string kRawDurationRow = "Raw Mixer Layer Duration";
const std::string kPoDurationRow = "PO Mixer Layer Duration";

std::string backend_of(const ExperimentResult& r) { return r.config.profile ? r.config.profile->name : r.config.backend; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool is_duration_row(const std::string& row) { return row == kRawDurationRow || row == kPoDurationRow; }

}  // namespace

ReportTable build_report(const std::vector<ExperimentResult>& runs, const std::vector<DurationSearchResult>& searches) {
  if (runs.empty()) throw InputError("report needs at least one result");

  ReportTable t;
  std::vector<std::pair<std::string, ModelKind>> keys;
  for (const auto& r : runs) {
    std::pair<std::string, ModelKind> key{backend_of(r), r.config.model};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      keys.push_back(key);
      t.columns.push_back(key.first + " (" + model_name(key.second) + ")");
    }
  }
  t.rows = kArRows;
  t.rows.push_back(kRawDurationRow);
  t.rows.push_back(kPoDurationRow);
  t.cells.assign(t.rows.size(), std::vector<std::optional<double>>(t.columns.size()));

  for (std::size_t c = 0; c < keys.size(); ++c) {
    std::vector<double> sum(kVariants.size(), 0.0), count(kVariants.size(), 0.0);
    std::optional<int> raw_duration;
    for (const auto& r : runs) {
      if (std::make_pair(backend_of(r), r.config.model) != keys[c]) continue;
      const auto it = std::find(kVariants.begin(), kVariants.end(), r.variant);
      if (it == kVariants.end()) throw InputError("unknown result variant '" + r.variant + "'");
      const auto v = static_cast<std::size_t>(it - kVariants.begin());
      sum[v] += (r.variant == "M3" && r.ar_mitigated) ? *r.ar_mitigated : r.ar_raw;
      count[v] += 1.0;
      if (!raw_duration) raw_duration = r.stats.mixer_duration_dt;
    }
    for (std::size_t v = 0; v < kVariants.size(); ++v)
      if (count[v] > 0) t.cells[v][c] = sum[v] / count[v];
    if (raw_duration) t.cells[4][c] = *raw_duration;
    if (keys[c].second == ModelKind::Hybrid)
      for (const auto& s : searches)
        if (s.backend == keys[c].first) t.cells[5][c] = s.min_duration;
  }
  return t;
}

std::string ReportTable::to_csv() const {
  std::ostringstream os;
  os << kReportCsvHeader << '\n' << "metric";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << rows[r];
    for (const auto& v : cells[r]) os << ',' << (v ? fmt(*v) : "");
    os << '\n';
  }
  return os.str();
}

std::string ReportTable::to_markdown() const {
  std::ostringstream os;
  os << "| Backends |";
  for (const auto& c : columns) os << ' ' << c << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) os << "---|";
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << "| " << rows[r] << " |";
    for (const auto& v : cells[r]) {
      if (!v)
        os << " - |";
      else if (is_duration_row(rows[r]))
        os << ' ' << static_cast<int>(*v) << "dt |";
      else
        os << ' ' << fmt(100.0 * *v) << "% |";
    }
    os << '\n';
  }
  return os.str();
}

std::string convergence_csv(const ExperimentResult& run) {
  std::ostringstream os;
  os << kConvergenceCsvHeader << '\n' << "eval,cost,best_cost\n";
  double best = 0.0;
  for (std::size_t i = 0; i < run.opt.history.size(); ++i) {
    const double c = run.opt.history[i].cost;
    best = i == 0 ? c : std::min(best, c);
    os << i + 1 << ',' << fmt(c) << ',' << fmt(best) << '\n';
  }
  return os.str();
}

}  // namespace hybridpulse
