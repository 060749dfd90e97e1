#pragma once

#include <array>
#include <span>

#include "glass/nsga2.hpp"

namespace glass {

/// Area dominated by a set of two-objective points (minimization) and
/// bounded by the reference point. Points not strictly better than the
/// reference in both objectives contribute nothing.
double hypervolume_2d(std::span<const ObjectiveVector> points, std::array<double, 2> reference);

}  // namespace glass
