#pragma once

#include <string>
#include <vector>

namespace pumpout {

enum class ChartMetric { TestAccuracy, LabelPrecision, MeanTrainLoss };

/// Renders one polyline per input CSV (metric vs. epoch) as an SVG 1.1
/// document: labelled axes, tick marks, and a legend built from the file
/// stems. Output bytes are deterministic for fixed inputs. Throws
/// FormatError, naming file and line, on malformed CSV.
std::string render_chart_svg(const std::vector<std::string>& csv_paths, ChartMetric metric);

/// render_chart_svg written to out_path.
void emit_chart(const std::vector<std::string>& csv_paths, const std::string& out_path,
                ChartMetric metric = ChartMetric::TestAccuracy);

}  // namespace pumpout
