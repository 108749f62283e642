#ifndef NILMIN_MESH_HPP
#define NILMIN_MESH_HPP

#include <vector>

#include "nilmin/grid.hpp"
#include "nilmin/nil3.hpp"

namespace nilmin {

// sampled immersion over a grid; `defined` marks points where the
// construction succeeded, everything else carries flags for the report
struct SurfaceMesh {
  GridSpec grid;
  std::vector<Nil3Point> points;
  std::vector<uint8_t> defined;
  std::vector<uint8_t> vertical;
  std::vector<uint8_t> branch;
  std::vector<double> conf;
  std::vector<double> support;

  SurfaceMesh() = default;
  explicit SurfaceMesh(const GridSpec& g)
      : grid(g),
        points(g.size()),
        defined(g.size(), 0),
        vertical(g.size(), 0),
        branch(g.size(), 0),
        conf(g.size(), 0.0),
        support(g.size(), 0.0) {}
};

} // namespace nilmin

#endif
