#pragma once

#include <string>
#include <vector>

#include "mcsense/estimator.hpp"
#include "mcsense/experiment.hpp"
#include "mcsense/siggen.hpp"

namespace mcsense {

enum class PlotKind { PdVsSnr, PfVsSnr, PdVsM };

PlotKind plot_kind_from_string(const std::string& name);  // "pd", "pf", "pd-m"

// All renderers are deterministic: equal input gives identical bytes.
// Empty input throws EmptyTable.
std::string render_metrics_svg(const std::vector<MetricsRow>& rows, PlotKind kind);

/// J(b_i) in dB against step i with the (p - i) sigma^2 staircase.
std::string render_trace_svg(const DetectionResult& result);

std::string render_psd_svg(const std::vector<PsdPoint>& psd);

}  // namespace mcsense
