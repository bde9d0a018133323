#pragma once

#include <string>

#include "dio/sim.hpp"

namespace dio {

/// Standalone SVG line chart of x_i(t) for every agent, with axes, ticks and
/// a legend. An optional horizontal reference line marks `reference`.
std::string trajectory_svg(const Trajectory& trajectory, const std::string& title,
                           std::optional<double> reference = {});

}  // namespace dio
