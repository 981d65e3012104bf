#ifndef ALEMOR_GRID_HPP
#define ALEMOR_GRID_HPP

#include <vector>

namespace alemor {

/// Uniform cell-centered 1D grid.
struct Grid {
  int n_cells = 0;
  double x_left = 0.0;
  double x_right = 1.0;
  double dx = 0.0;
  std::vector<double> centers;

  static Grid uniform(int n_cells, double x_left, double x_right);

  double length() const { return x_right - x_left; }
};

} // namespace alemor

#endif
