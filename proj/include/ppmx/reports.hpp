#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ppmx/importance.hpp"
#include "ppmx/shap.hpp"
#include "ppmx/stability.hpp"

namespace ppmx {

// Horizontal bars for the top-k entries. Each bar carries data-feature and
// data-value attributes holding the exact score.
std::string bar_chart_svg(const ImportanceVector& iv, std::size_t k, const std::string& title);

// Beeswarm-style scatter: one row per feature, x = attribution, colour =
// feature value scaled to the column's range.
std::string shap_summary_svg(const AttributionSet& set, const std::vector<std::string>& features,
                             const std::string& title);

// Long format: feature,case_id,prefix_length,value,phi.
void write_shap_summary_csv(std::ostream& out, const AttributionSet& set, const std::vector<std::string>& features);

void write_stability_csv(std::ostream& out, const StabilityReport& report);

// Builds charts, CSV tables and summary.md from the JSON artifacts of a run
// directory. Safe to call again; outputs are overwritten.
void emit_reports(const std::filesystem::path& run_dir);

}  // namespace ppmx
