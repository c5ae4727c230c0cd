#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature with interval bisection.
// Panels are kept in a max-heap keyed by error estimate; the worst panel is
// bisected until the summed error estimate meets the requested absolute
// tolerance. The tolerance is floored at 64 eps Sum|panel value| -- the
// roundoff resolution of the panel sum -- so a request below what double
// precision can represent terminates at the floor instead of exhausting the
// panel budget. The final sum runs over panels sorted by left endpoint with
// Kahan compensation, so results are deterministic for a given refinement
// history (which itself is deterministic).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "dephasim/model.hpp"

namespace dephasim {

namespace detail {

// K15 abscissae on [0,1] (symmetric +/-) and weights; G7 weights for the
// embedded Gauss rule (its nodes are the odd-index Kronrod abscissae).
inline constexpr double gk_xgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;  // K15 estimate
  double error = 0.0;  // |K15 - G7|
};

struct PanelErrorLess {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

template <typename F>
Panel gk15_panel(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = gk_wgk[7] * f_center;
  double gauss = gk_wg[3] * f_center;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * gk_xgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += gk_wgk[j] * fsum;
    if (j % 2 == 1) gauss += gk_wg[j / 2] * fsum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = std::abs((kronrod - gauss) * half);
  return p;
}

}  // namespace detail

// Integrate f over [a, b] to absolute tolerance abs_tol (floored at the
// roundoff resolution of the panel sum, see above). Initial panels are no
// wider than max_panel_width (pass +inf or <=0 to start from one panel).
// Throws QuadratureError if the tolerance is not met within max_panels.
template <typename F>
double adaptive_gk15(F&& f, double a, double b, double abs_tol,
                     double max_panel_width = 0.0,
                     std::size_t max_panels = 200000) {
  if (!(b > a)) return 0.0;

  std::vector<detail::Panel> heap;
  const double width = b - a;
  std::size_t n_init = 1;
  if (max_panel_width > 0.0 && std::isfinite(max_panel_width) &&
      max_panel_width < width) {
    n_init = static_cast<std::size_t>(std::ceil(width / max_panel_width));
    n_init = std::min(n_init, max_panels);
  }
  heap.reserve(n_init + 64);
  double err_sum = 0.0;
  double abs_sum = 0.0;  // Sum |panel value|: sets the roundoff floor below
  for (std::size_t i = 0; i < n_init; ++i) {
    const double pa = a + width * static_cast<double>(i) / static_cast<double>(n_init);
    const double pb = (i + 1 == n_init)
                          ? b
                          : a + width * static_cast<double>(i + 1) /
                                    static_cast<double>(n_init);
    heap.push_back(detail::gk15_panel(f, pa, pb));
    err_sum += heap.back().error;
    abs_sum += std::abs(heap.back().value);
  }
  std::make_heap(heap.begin(), heap.end(), detail::PanelErrorLess{});

  constexpr double noise = 64.0 * std::numeric_limits<double>::epsilon();
  while (err_sum > std::max(abs_tol, noise * abs_sum)) {
    if (heap.size() >= max_panels) {
      throw QuadratureError(
          "adaptive_gk15: tolerance " + std::to_string(abs_tol) +
          " not reached within " + std::to_string(max_panels) + " panels" +
          " (error estimate " + std::to_string(err_sum) + ")");
    }
    std::pop_heap(heap.begin(), heap.end(), detail::PanelErrorLess{});
    const detail::Panel worst = heap.back();
    heap.pop_back();
    err_sum -= worst.error;
    abs_sum -= std::abs(worst.value);
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError(
          "adaptive_gk15: panel collapsed to machine width before reaching "
          "tolerance (likely a non-integrable singularity)");
    }
    detail::Panel left = detail::gk15_panel(f, worst.a, mid);
    detail::Panel right = detail::gk15_panel(f, mid, worst.b);
    err_sum += left.error + right.error;
    abs_sum += std::abs(left.value) + std::abs(right.value);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), detail::PanelErrorLess{});
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), detail::PanelErrorLess{});
  }

  // Deterministic summation: order panels by position, compensated add.
  std::sort(heap.begin(), heap.end(),
            [](const detail::Panel& lhs, const detail::Panel& rhs) {
              return lhs.a < rhs.a;
            });
  double sum = 0.0;
  double comp = 0.0;
  for (const detail::Panel& p : heap) {
    const double y = p.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace dephasim
