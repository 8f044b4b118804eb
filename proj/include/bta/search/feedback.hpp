#pragma once

#include <optional>
#include <string>

#include "bta/search/evaluate.hpp"
#include "bta/search/tactical.hpp"

namespace bta::search {

// Plain-language description of a candidate's metrics. With a baseline, every
// field reports its change ("kills improved from 3 to 5", "deaths: no change
// (1)") and the fields are ordered worst regression first.
std::string metrics_to_text(const MetricsSummary& metrics, const std::optional<MetricsSummary>& baseline = {});

// One line per dimension: "- map_control: 6.2/10 (note)".
std::string tactical_to_text(const TacticalReport& report);

// The feedback block handed back to the generator for one evaluated parent.
std::string evaluation_feedback(const Evaluation& eval, const std::optional<MetricsSummary>& baseline = {});

}  // namespace bta::search
