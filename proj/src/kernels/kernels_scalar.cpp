#include "momlab/kernels.hpp"

namespace momlab::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void eval_poly(const TermTable& terms, const double* coords, std::size_t npts,
               double* out) {
  const int dim = terms.dim;
  const std::size_t nterms = terms.size();
  for (std::size_t p = 0; p < npts; ++p) {
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
    for (std::size_t p = 0; p < npts; ++p) {
      double prod = 1.0;
      for (int i = 0; i < dim; ++i) {
        const double x = coords[i * npts + p];
        for (int j = 0; j < e[i]; ++j) prod *= x;
      }
      col[p] = prod;
    }
  }
}

}  // namespace momlab::kernels::scalar
