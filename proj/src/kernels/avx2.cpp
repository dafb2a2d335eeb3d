// Compiled with -mavx2 only; nothing here may run before the dispatcher has
// confirmed CPU support.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace tlab::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

template <class Vop, class Sop>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Vop vop, Sop sop) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, vop(va, vb));
  }
  for (; i < n; ++i) out[i] = sop(a[i], b[i]);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); },
         [](double x, double y) { return x + y; });
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); },
         [](double x, double y) { return x - y; });
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); },
         [](double x, double y) { return x * y; });
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_div_pd(x, y); },
         [](double x, double y) { return x / y; });
}

void neg(const double* a, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_xor_pd(_mm256_loadu_pd(a + i), sign));
  }
  for (; i < n; ++i) out[i] = -a[i];
}

void sqrt(const double* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = std::sqrt(a[i]);
}

void horner(const double* c, std::size_t m, const double* xs, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d x = _mm256_loadu_pd(xs + i);
    __m256d acc = _mm256_set1_pd(c[0]);
    for (std::size_t k = 1; k < m; ++k) {
      acc = _mm256_mul_pd(acc, x);
      acc = _mm256_add_pd(acc, _mm256_set1_pd(c[k]));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = horner_one(c, m, xs[i]);
}

void line_circle(const LineBatch& lines, Circle circle, const CircleHits& hits) {
  const std::size_t n = lines.px.size();
  const __m256d cx = _mm256_set1_pd(circle.cx);
  const __m256d cy = _mm256_set1_pd(circle.cy);
  const __m256d r = _mm256_set1_pd(circle.r);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d px = _mm256_loadu_pd(lines.px.data() + i);
    __m256d py = _mm256_loadu_pd(lines.py.data() + i);
    __m256d dx = _mm256_loadu_pd(lines.dx.data() + i);
    __m256d dy = _mm256_loadu_pd(lines.dy.data() + i);
    __m256d ex = _mm256_sub_pd(cx, px);
    __m256d ey = _mm256_sub_pd(cy, py);
    __m256d t = _mm256_add_pd(_mm256_mul_pd(ex, dx), _mm256_mul_pd(ey, dy));
    __m256d cr = _mm256_sub_pd(_mm256_mul_pd(dx, ey), _mm256_mul_pd(dy, ex));
    __m256d a = _mm256_and_pd(cr, abs_mask);
    __m256d h2 = _mm256_mul_pd(_mm256_sub_pd(r, a), _mm256_add_pd(r, a));
    __m256d positive = _mm256_cmp_pd(h2, zero, _CMP_GT_OQ);
    __m256d half = _mm256_and_pd(_mm256_sqrt_pd(_mm256_max_pd(h2, zero)), positive);
    _mm256_storeu_pd(hits.t_mid.data() + i, t);
    _mm256_storeu_pd(hits.clearance.data() + i, _mm256_sub_pd(a, r));
    _mm256_storeu_pd(hits.half.data() + i, half);
  }
  line_circle_scalar(lines, circle, hits, i, n);
}

}  // namespace

const Table kAvx2Table{Isa::Avx2, add, sub, mul, div, neg, sqrt, horner, line_circle};

}  // namespace tlab::kernels::detail
