#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace topcorr::detail {

struct NelderMeadResult
{
  std::array<double, 2> x;
  double fx;
  int evaluations;
};

/// Downhill simplex in two dimensions. Stops when the simplex spread in f drops below
/// `ftol` and its diameter below `xtol`, or after `max_evals` evaluations.
inline NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f,
                                       std::array<double, 2> start, double step, double ftol, double xtol,
                                       int max_evals)
{
  struct Vertex
  {
    std::array<double, 2> x;
    double f;
  };
  int evals = 0;
  auto eval = [&](const std::array<double, 2>& x) {
    ++evals;
    return Vertex{x, f(x[0], x[1])};
  };
  std::array<Vertex, 3> s = {eval(start), eval({start[0] + step, start[1]}), eval({start[0], start[1] + step})};

  while (evals < max_evals) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double diam = std::max(std::hypot(s[1].x[0] - s[0].x[0], s[1].x[1] - s[0].x[1]),
                                 std::hypot(s[2].x[0] - s[0].x[0], s[2].x[1] - s[0].x[1]));
    if (s[2].f - s[0].f <= ftol && diam <= xtol)
      break;

    const std::array<double, 2> c = {0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
    auto along = [&](double t) {
      return std::array<double, 2>{c[0] + t * (s[2].x[0] - c[0]), c[1] + t * (s[2].x[1] - c[1])};
    };
    const Vertex r = eval(along(-1.0));
    if (r.f < s[0].f) {
      const Vertex e = eval(along(-2.0));
      s[2] = e.f < r.f ? e : r;
    } else if (r.f < s[1].f) {
      s[2] = r;
    } else {
      const Vertex k = r.f < s[2].f ? eval(along(-0.5)) : eval(along(0.5));
      if (k.f < std::min(r.f, s[2].f)) {
        s[2] = k;
      } else {
        for (int i = 1; i < 3; ++i)
          s[i] = eval({0.5 * (s[0].x[0] + s[i].x[0]), 0.5 * (s[0].x[1] + s[i].x[1])});
      }
    }
  }
  const auto best = std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  return {best->x, best->f, evals};
}

} // namespace topcorr::detail
