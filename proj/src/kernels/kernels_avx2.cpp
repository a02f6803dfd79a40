#include <immintrin.h>

#include "momlab/kernels.hpp"

namespace momlab::kernels::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// Lane-wise the operation order matches the scalar reference, so results
// agree bit for bit (this TU is built with -ffp-contract=off).
void eval_poly(const TermTable& terms, const double* coords, std::size_t npts,
               double* out) {
  const int dim = terms.dim;
  const std::size_t nterms = terms.size();
  std::size_t p = 0;
  for (; p + 4 <= npts; p += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < nterms; ++k) {
      __m256d prod = _mm256_set1_pd(terms.coeffs[k]);
      const std::uint8_t* e = &terms.exponents[k * dim];
      for (int i = 0; i < dim; ++i) {
        if (e[i] == 0) continue;
        const __m256d x = _mm256_loadu_pd(coords + i * npts + p);
        for (int j = 0; j < e[i]; ++j) prod = _mm256_mul_pd(prod, x);
      }
      acc = _mm256_add_pd(acc, prod);
    }
    _mm256_storeu_pd(out + p, acc);
  }
  if (p < npts) {
    const std::size_t rest = npts - p;
    for (std::size_t q = 0; q < rest; ++q) {
      double acc = 0.0;
      for (std::size_t k = 0; k < nterms; ++k) {
        double prod = terms.coeffs[k];
        const std::uint8_t* e = &terms.exponents[k * dim];
        for (int i = 0; i < dim; ++i) {
          const double x = coords[i * npts + p + q];
          for (int j = 0; j < e[i]; ++j) prod *= x;
        }
        acc += prod;
      }
      out[p + q] = acc;
    }
  }
}

void eval_monomials(const TermTable& terms, const double* coords,
                    std::size_t npts, double* out) {
  const int dim = terms.dim;
  const std::size_t nterms = terms.exponents.size() / (dim > 0 ? dim : 1);
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t k = 0; k < nterms; ++k) {
    const std::uint8_t* e = &terms.exponents[k * dim];
    double* col = out + k * npts;
    std::size_t p = 0;
    for (; p + 4 <= npts; p += 4) {
      __m256d prod = one;
      for (int i = 0; i < dim; ++i) {
        if (e[i] == 0) continue;
        const __m256d x = _mm256_loadu_pd(coords + i * npts + p);
        for (int j = 0; j < e[i]; ++j) prod = _mm256_mul_pd(prod, x);
      }
      _mm256_storeu_pd(col + p, prod);
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

}  // namespace momlab::kernels::avx2
