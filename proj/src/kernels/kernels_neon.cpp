#include <arm_neon.h>

#include "momlab/kernels.hpp"

namespace momlab::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void eval_poly(const TermTable& terms, const double* coords, std::size_t npts,
               double* out) {
  const int dim = terms.dim;
  const std::size_t nterms = terms.size();
  std::size_t p = 0;
  for (; p + 2 <= npts; p += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < nterms; ++k) {
      float64x2_t prod = vdupq_n_f64(terms.coeffs[k]);
      const std::uint8_t* e = &terms.exponents[k * dim];
      for (int i = 0; i < dim; ++i) {
        if (e[i] == 0) continue;
        const float64x2_t x = vld1q_f64(coords + i * npts + p);
        for (int j = 0; j < e[i]; ++j) prod = vmulq_f64(prod, x);
      }
      acc = vaddq_f64(acc, prod);
    }
    vst1q_f64(out + p, acc);
  }
  for (; p < npts; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nterms; ++k) {
      double prod = terms.coeffs[k];
      const std::uint8_t* e = &terms.exponents[k * dim];
      for (int i = 0; i < dim; ++i) {
        const double x = coords[i * npts + p];
        for (int j = 0; j < e[i]; ++j) prod *= x;
      }
      acc += prod;
    }
    out[p] = acc;
  }
}

void eval_monomials(const TermTable& terms, const double* coords,
                    std::size_t npts, double* out) {
  const int dim = terms.dim;
  const std::size_t nterms = terms.exponents.size() / (dim > 0 ? dim : 1);
  for (std::size_t k = 0; k < nterms; ++k) {
    const std::uint8_t* e = &terms.exponents[k * dim];
    double* col = out + k * npts;
    std::size_t p = 0;
    for (; p + 2 <= npts; p += 2) {
      float64x2_t prod = vdupq_n_f64(1.0);
      for (int i = 0; i < dim; ++i) {
        if (e[i] == 0) continue;
        const float64x2_t x = vld1q_f64(coords + i * npts + p);
        for (int j = 0; j < e[i]; ++j) prod = vmulq_f64(prod, x);
      }
      vst1q_f64(col + p, prod);
    }
    for (; p < npts; ++p) {
      double prod = 1.0;
      for (int i = 0; i < dim; ++i) {
        const double x = coords[i * npts + p];
        for (int j = 0; j < e[i]; ++j) prod *= x;
      }
      col[p] = prod;
    }
  }
}

}  // namespace momlab::kernels::neon
