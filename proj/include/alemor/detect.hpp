#ifndef ALEMOR_DETECT_HPP
#define ALEMOR_DETECT_HPP

#include <vector>

#include "alemor/grid.hpp"
#include "alemor/trajectory.hpp"

namespace alemor {

/// Feature trackers producing the calibration point of each snapshot.
/// ArgMax/ArgMin locate a peak (parabolic sub-cell refinement), SteepestPoint
/// the largest |u_{i+1}-u_i| jump, SteepestDescent the largest u_i-u_{i+1}
/// drop, ZeroCrossing the sign change nearest the previously tracked one.
enum class DetectorKind { ArgMax, ArgMin, SteepestPoint, ZeroCrossing, SteepestDescent };

/// One calibration point per snapshot. For periodic problems the sequence is
/// unwrapped to be continuous in time (no jump exceeding half the domain).
/// Throws (naming the time index) when the feature is absent in a snapshot.
std::vector<double> detect_theta(DetectorKind detector, const Trajectory& trajectory,
                                 const Grid& grid, bool periodic);

} // namespace alemor

#endif
