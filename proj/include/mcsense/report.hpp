#pragma once

#include <string>
#include <string_view>

#include "mcsense/ed_baseline.hpp"
#include "mcsense/estimator.hpp"

namespace mcsense {

// One-line JSON records (JSON lines). Keys: pattern{L,cosets}, sigma2,
// initial_j, steps[{channel,j,threshold}], b_hat, N_hat, final_j, terminated_by.
std::string detection_report(const DetectionResult& result);
DetectionResult parse_detection_report(std::string_view line);

// Keys: method, threshold, decisions ("0"/"1" per channel), statistics, b_hat.
std::string ed_report(const EdDecision& decision);

}  // namespace mcsense
