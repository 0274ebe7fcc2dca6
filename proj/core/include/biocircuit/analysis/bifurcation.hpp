#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::analysis {

struct BifurcationDiagram {
  std::string param_name;
  std::vector<double> grid;
  /// Equilibria at each grid value, sorted lexicographically.
  std::vector<std::vector<ode::Equilibrium>> branches;
  /// Branch label per equilibrium, matched across adjacent grid points by
  /// nearest-neighbor continuation.
  std::vector<std::vector<int>> branch_ids;
  /// Stable-equilibrium count per grid value.
  std::vector<int> stable_counts;
  /// Grid intervals (lo, hi) across which the stable count changes.
  std::vector<std::pair<double, double>> detected_events;

  int branch_count = 0;
};

/// Rebuilds the system at every grid value, finds and classifies equilibria,
/// and matches branches for plotting continuity.
BifurcationDiagram bifurcation_sweep(
    const std::function<ode::OdeSystem(double)>& family, std::string param_name,
    std::span<const double> grid, const ode::Box& box, int n_starts);

struct GridScanCandidate {
  std::vector<double> point;  // cluster center
  ode::Stability stability;  // from the Jacobian at the cluster center
};

/// Independent equilibrium count for 2-D systems: scan an n_cells x n_cells
/// grid for cells where both rhs components change sign, cluster adjacent
/// candidate cells, and classify each cluster center. Shares no code path
/// with the Newton-based finder.
std::vector<GridScanCandidate> grid_scan_equilibria_2d(const ode::OdeSystem& system,
                                                       const ode::Box& box,
                                                       int n_cells = 200,
                                                       double t_eval = 0.0);

}  // namespace biocircuit::analysis
