#pragma once

#include <cmath>
#include <cstddef>

#include "tlab/kernels.hpp"

namespace tlab::kernels::detail {

// Scalar bodies shared by the reference table and the SIMD tail loops.

inline double horner_one(const double* c, std::size_t m, double x) {
  double acc = c[0];
  for (std::size_t k = 1; k < m; ++k) {
    acc = acc * x;
    acc = acc + c[k];
  }
  return acc;
}

inline void line_circle_one(double px, double py, double dx, double dy, Circle c, double& t_mid,
                            double& clearance, double& half) {
  double ex = c.cx - px;
  double ey = c.cy - py;
  double t = ex * dx + ey * dy;
  double cr = dx * ey - dy * ex;
  double a = std::fabs(cr);
  double h2 = (c.r - a) * (c.r + a);
  t_mid = t;
  clearance = a - c.r;
  half = h2 > 0.0 ? std::sqrt(h2) : 0.0;
}

void horner_scalar(const double* c, std::size_t m, const double* xs, double* out, std::size_t n);
void line_circle_scalar(const LineBatch& lines, Circle circle, const CircleHits& hits,
                        std::size_t begin, std::size_t end);

extern const Table kScalarTable;
#if defined(TLAB_HAVE_AVX2)
extern const Table kAvx2Table;
#endif

}  // namespace tlab::kernels::detail
