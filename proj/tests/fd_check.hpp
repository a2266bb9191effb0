#pragma once

// Central finite-difference gradient checking against analytic backward
// passes. Parameters are float32, so per-coordinate probes drown in
// rounding noise wherever a single gradient entry is near zero; probing
// along random +-1 (Rademacher) directions keeps the directional
// derivative at the scale of the whole gradient and conditions the
// relative error properly.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "guigan/ndnet.hpp"
#include "guigan/rng.hpp"

namespace fdtest {

struct FdReport {
  double max_rel_err = 0.0;
  std::string worst;  // "<tensor>#<direction>"
  int checked = 0;
};

// loss_fn must be a pure evaluation (no cached state left behind) and
// grads must already hold one analytic backward pass. Each tensor is
// probed along `directions` random +-1 directions with a central
// difference of step eps.
inline FdReport fd_check(guigan::ParamSet& ps, const std::function<double()>& loss_fn,
                         uint64_t seed = 0, double eps = 1e-2, int directions = 3) {
  guigan::Rng rng(seed * 7919 + 13);
  FdReport rep;
  for (auto& [name, t] : ps.entries) {
    if (t->grad.size() != t->data.size()) continue;
    const size_t n = t->data.size();
    double g1 = 0.0;
    for (float g : t->grad) g1 += std::fabs(g);
    for (int dir = 0; dir < directions; ++dir) {
      // direction 0 is gradient-aligned (maximal signal); the rest are
      // random +-1, where near-zero directional derivatives are floored
      // against cancellation noise
      std::vector<float> d(n);
      double analytic = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (dir == 0)
          d[i] = t->grad[i] >= 0.0f ? 1.0f : -1.0f;
        else
          d[i] = (rng.next_u64() & 1) ? 1.0f : -1.0f;
        analytic += static_cast<double>(t->grad[i]) * d[i];
      }
      std::vector<float> saved = t->data;
      for (size_t i = 0; i < n; ++i) t->data[i] = saved[i] + static_cast<float>(eps) * d[i];
      double up = loss_fn();
      for (size_t i = 0; i < n; ++i) t->data[i] = saved[i] - static_cast<float>(eps) * d[i];
      double down = loss_fn();
      t->data = saved;
      double numeric = (up - down) / (2.0 * eps);
      double denom = std::max({std::fabs(numeric), std::fabs(analytic), 0.02 * g1, 1e-2});
      double rel = std::fabs(numeric - analytic) / denom;
      ++rep.checked;
      if (rel > rep.max_rel_err) {
        rep.max_rel_err = rel;
        rep.worst = name + "#" + std::to_string(dir);
      }
    }
  }
  return rep;
}

// Same directional probe for an input vector whose analytic gradient was
// returned by backward().
inline FdReport fd_check_input(guigan::Vec& x, const guigan::Vec& dx,
                               const std::function<double()>& loss_fn, uint64_t seed = 0,
                               double eps = 1e-2, int directions = 3) {
  guigan::Rng rng(seed * 104729 + 7);
  FdReport rep;
  const size_t n = x.size();
  double g1 = 0.0;
  for (float g : dx) g1 += std::fabs(g);
  for (int dir = 0; dir < directions; ++dir) {
    std::vector<float> d(n);
    double analytic = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (dir == 0)
        d[i] = dx[i] >= 0.0f ? 1.0f : -1.0f;
      else
        d[i] = (rng.next_u64() & 1) ? 1.0f : -1.0f;
      analytic += static_cast<double>(dx[i]) * d[i];
    }
    std::vector<float> saved = x;
    for (size_t i = 0; i < n; ++i) x[i] = saved[i] + static_cast<float>(eps) * d[i];
    double up = loss_fn();
    for (size_t i = 0; i < n; ++i) x[i] = saved[i] - static_cast<float>(eps) * d[i];
    double down = loss_fn();
    x = saved;
    double numeric = (up - down) / (2.0 * eps);
    double denom = std::max({std::fabs(numeric), std::fabs(analytic), 0.02 * g1, 1e-2});
    double rel = std::fabs(numeric - analytic) / denom;
    ++rep.checked;
    if (rel > rep.max_rel_err) {
      rep.max_rel_err = rel;
      rep.worst = "input#" + std::to_string(dir);
    }
  }
  return rep;
}

}  // namespace fdtest
