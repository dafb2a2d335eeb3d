#include <cmath>

#include "kernels_impl.hpp"

namespace tlab::kernels::detail {

namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}
void neg(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -a[i];
}
void sqrt(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i]);
}

}  // namespace

void horner_scalar(const double* c, std::size_t m, const double* xs, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = horner_one(c, m, xs[i]);
}

void line_circle_scalar(const LineBatch& lines, Circle circle, const CircleHits& hits,
                        std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    line_circle_one(lines.px[i], lines.py[i], lines.dx[i], lines.dy[i], circle, hits.t_mid[i],
                    hits.clearance[i], hits.half[i]);
  }
}

namespace {
void line_circle(const LineBatch& lines, Circle circle, const CircleHits& hits) {
  line_circle_scalar(lines, circle, hits, 0, lines.px.size());
}
}  // namespace

const Table kScalarTable{Isa::Scalar, add, sub, mul, div, neg, sqrt, horner_scalar, line_circle};

}  // namespace tlab::kernels::detail
