#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant selected at runtime. The
// variants perform the same IEEE operations in the same order (no FMA
// contraction), so results are bit-identical; tests/test_kernels.cpp holds
// them to that.

#include <cstddef>
#include <span>
#include <string_view>

namespace tlab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct LineBatch {
  std::span<const double> px, py;  // points on the lines
  std::span<const double> dx, dy;  // unit directions
};

/// Per-line result of intersecting p + t d with a circle.
struct CircleHits {
  std::span<double> t_mid;      // parameter of the foot of the perpendicular from the center
  std::span<double> clearance;  // |perpendicular distance| - r (negative: secant)
  std::span<double> half;       // half chord length in t (0 when clearance >= 0)
};

struct Circle {
  double cx, cy, r;
};

struct Table {
  Isa isa;
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*div)(const double* a, const double* b, double* out, std::size_t n);
  void (*neg)(const double* a, double* out, std::size_t n);
  void (*sqrt)(const double* a, double* out, std::size_t n);
  /// out[i] = ((c[0] x + c[1]) x + ...) + c[m-1]; coefficients highest degree first.
  void (*horner)(const double* coeffs, std::size_t m, const double* xs, double* out,
                 std::size_t n);
  void (*line_circle)(const LineBatch& lines, Circle circle, const CircleHits& hits);
};

const Table& scalar_table();
/// nullptr when this build or this CPU lacks AVX2.
const Table* avx2_table();

/// Table chosen at first use: AVX2 when available, unless the environment
/// variable TRAVERSE_LAB_SIMD=scalar forces the reference path.
const Table& active();

}  // namespace tlab::kernels
