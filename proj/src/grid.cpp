#include "alemor/grid.hpp"

#include "alemor/errors.hpp"

namespace alemor {

Grid Grid::uniform(int n_cells, double x_left, double x_right) {
  if (n_cells <= 0 || !(x_right > x_left))
    throw Error(ErrorCode::Config, "grid requires n_cells > 0 and x_right > x_left");
  Grid g;
  g.n_cells = n_cells;
  g.x_left = x_left;
  g.x_right = x_right;
  g.dx = (x_right - x_left) / n_cells;
  g.centers.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) g.centers[i] = x_left + (i + 0.5) * g.dx;
  return g;
}

} // namespace alemor
