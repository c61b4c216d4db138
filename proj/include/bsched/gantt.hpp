#pragma once

#include <string>

#include "bsched/core.hpp"

namespace bsched {

// Static SVG: one bar per job on its machine row, one dashed vertical
// marker per distinct release date.
std::string gantt_svg(const Instance& inst, const Schedule& sched);

}  // namespace bsched
