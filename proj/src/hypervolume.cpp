#include "glass/hypervolume.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace glass {

double hypervolume_2d(std::span<const ObjectiveVector> points, std::array<double, 2> reference) {
  std::vector<std::pair<double, double>> pts;
  for (const ObjectiveVector& p : points) {
    if (p.size() != 2) throw std::invalid_argument("hypervolume_2d: points must have 2 objectives");
    if (p[0] < reference[0] && p[1] < reference[1]) pts.emplace_back(p[0], p[1]);
  }
  std::sort(pts.begin(), pts.end());
  // Sweep along f1; each point adds the strip between it and the next step.
  double area = 0.0;
  double ceiling = reference[1];
  for (const auto& [f1, f2] : pts) {
    if (f2 >= ceiling) continue;
    area += (reference[0] - f1) * (ceiling - f2);
    ceiling = f2;
  }
  return area;
}

}  // namespace glass
