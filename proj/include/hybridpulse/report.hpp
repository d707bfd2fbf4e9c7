#pragma once

// Aggregation of finished runs into comparison tables. Never simulates.

#include <optional>
#include <string>
#include <vector>

#include "hybridpulse/experiment.hpp"

namespace hybridpulse {

inline constexpr const char* kReportCsvHeader = "# hybridpulse report v1";
inline constexpr const char* kConvergenceCsvHeader = "# hybridpulse convergence v1";

struct ReportTable {
  std::vector<std::string> columns;  // "<backend> (<model>)"
  std::vector<std::string> rows;     // Raw AR, GO AR, M3 AR, CVaR AR, Raw Mixer Layer Duration, PO Mixer Layer Duration
  std::vector<std::vector<std::optional<double>>> cells;  // [row][column]

  std::string to_csv() const;
  std::string to_markdown() const;
};

/// Cells average over repeated runs (e.g. seeds). `searches` fill the PO duration
/// row of the hybrid column on the matching backend. Throws InputError when empty.
ReportTable build_report(const std::vector<ExperimentResult>& runs,
                         const std::vector<DurationSearchResult>& searches = {});

/// eval,cost,best_cost rows under a versioned comment header.
std::string convergence_csv(const ExperimentResult& run);

}  // namespace hybridpulse
