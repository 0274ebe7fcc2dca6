#include "biocircuit/analysis/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace biocircuit::analysis {
namespace {

double relative_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max({den, std::abs(a[i]), std::abs(b[i])});
  }
  return num / den;
}

}  // namespace

BifurcationDiagram bifurcation_sweep(
    const std::function<ode::OdeSystem(double)>& family, std::string param_name,
    std::span<const double> grid, const ode::Box& box, int n_starts) {
  if (grid.size() < 2) throw std::invalid_argument("sweep grid needs at least two values");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly increasing");

  BifurcationDiagram diagram;
  diagram.param_name = std::move(param_name);
  diagram.grid.assign(grid.begin(), grid.end());

  int next_branch = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ode::OdeSystem sys = family(grid[k]);
    std::vector<ode::Equilibrium> eqs = ode::find_equilibria(sys, box, n_starts);
    std::vector<int> ids(eqs.size(), -1);

    if (k == 0) {
      for (std::size_t i = 0; i < eqs.size(); ++i) ids[i] = next_branch++;
    } else {
      // greedy nearest-neighbor continuation against the previous grid point
      const auto& prev = diagram.branches.back();
      const auto& prev_ids = diagram.branch_ids.back();
      struct Pair {
        double dist;
        std::size_t cur, prev;
      };
      std::vector<Pair> pairs;
      for (std::size_t i = 0; i < eqs.size(); ++i)
        for (std::size_t j = 0; j < prev.size(); ++j)
          pairs.push_back({relative_distance(eqs[i].point, prev[j].point), i, j});
      std::sort(pairs.begin(), pairs.end(),
                [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
      std::vector<bool> cur_used(eqs.size(), false), prev_used(prev.size(), false);
      for (const Pair& p : pairs) {
        if (cur_used[p.cur] || prev_used[p.prev]) continue;
        ids[p.cur] = prev_ids[p.prev];
        cur_used[p.cur] = true;
        prev_used[p.prev] = true;
      }
      for (std::size_t i = 0; i < eqs.size(); ++i)
        if (ids[i] < 0) ids[i] = next_branch++;
    }

    int stable = 0;
    for (const ode::Equilibrium& e : eqs)
      if (e.stability == ode::Stability::stable) ++stable;
    diagram.stable_counts.push_back(stable);
    diagram.branches.push_back(std::move(eqs));
    diagram.branch_ids.push_back(std::move(ids));
  }

  diagram.branch_count = next_branch;
  for (std::size_t k = 0; k + 1 < diagram.grid.size(); ++k)
    if (diagram.stable_counts[k] != diagram.stable_counts[k + 1])
      diagram.detected_events.emplace_back(diagram.grid[k], diagram.grid[k + 1]);
  return diagram;
}

std::vector<GridScanCandidate> grid_scan_equilibria_2d(const ode::OdeSystem& system,
                                                       const ode::Box& box,
                                                       int n_cells, double t_eval) {
  if (system.dim != 2)
    throw std::invalid_argument("grid scan supports two-dimensional systems only");
  box.validate(2);
  if (n_cells < 2) throw std::invalid_argument("n_cells must be >= 2");

  const int n = n_cells;
  const double dx = (box.hi[0] - box.lo[0]) / n;
  const double dy = (box.hi[1] - box.lo[1]) / n;

  // rhs components on the (n+1)^2 node grid
  std::vector<double> f0((n + 1) * (n + 1)), f1((n + 1) * (n + 1));
  std::vector<double> x(2), f(2);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      x[0] = box.lo[0] + i * dx;
      x[1] = box.lo[1] + j * dy;
      system.rhs(t_eval, x, f);
      f0[i * (n + 1) + j] = f[0];
      f1[i * (n + 1) + j] = f[1];
    }
  }

  auto sign_change = [&](const std::vector<double>& vals, int i, int j) {
    const double a = vals[i * (n + 1) + j];
    const double b = vals[(i + 1) * (n + 1) + j];
    const double c = vals[i * (n + 1) + j + 1];
    const double d = vals[(i + 1) * (n + 1) + j + 1];
    const double lo = std::min({a, b, c, d});
    const double hi = std::max({a, b, c, d});
    return lo <= 0.0 && hi >= 0.0;
  };

  std::vector<char> candidate(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sign_change(f0, i, j) && sign_change(f1, i, j)) candidate[i * n + j] = 1;

  // cluster 8-connected candidate cells
  std::vector<GridScanCandidate> out;
  std::vector<char> seen(n * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!candidate[i * n + j] || seen[i * n + j]) continue;
      double cx = 0.0, cy = 0.0;
      int count = 0;
      std::queue<std::pair<int, int>> queue;
      queue.push({i, j});
      seen[i * n + j] = 1;
      while (!queue.empty()) {
        auto [ci, cj] = queue.front();
        queue.pop();
        cx += box.lo[0] + (ci + 0.5) * dx;
        cy += box.lo[1] + (cj + 0.5) * dy;
        ++count;
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int ni = ci + di, nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
            if (!candidate[ni * n + nj] || seen[ni * n + nj]) continue;
            seen[ni * n + nj] = 1;
            queue.push({ni, nj});
          }
        }
      }
      GridScanCandidate cand;
      cand.point = {cx / count, cy / count};
      const std::vector<double> parts = ode::eigenvalue_real_parts(system, cand.point, t_eval);
      cand.stability = ode::stability_from_real_parts(parts);
      out.push_back(std::move(cand));
    }
  }
  std::sort(out.begin(), out.end(), [](const GridScanCandidate& a, const GridScanCandidate& b) {
    return std::lexicographical_compare(a.point.begin(), a.point.end(),
                                        b.point.begin(), b.point.end());
  });
  return out;
}

}  // namespace biocircuit::analysis
