#pragma once

#include <string>
#include <vector>

#include "pidfit/lti.hpp"

namespace pidfit {

/// Render superimposed step-response traces as a standalone SVG:
/// fixed 800x500 canvas, 10-tick axes, deterministic color cycle and byte
/// output. Traces may live on different grids.
std::string render_svg(const std::vector<TimeSeries>& traces,
                       const std::vector<std::string>& labels);

void emit_svg(const std::vector<TimeSeries>& traces, const std::vector<std::string>& labels,
              const std::string& out_path);

}  // namespace pidfit
