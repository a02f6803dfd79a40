#pragma once

// Data-parallel inner loops used by the solver and the grid evaluators.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64). The variant is picked once at startup
// from the running CPU; tests pin each variant with set_isa() and compare it
// against the scalar reference.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace momlab::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the CPU can run it.
bool isa_supported(Isa isa);

// Best supported variant on this machine.
Isa best_isa();

// Variant used by the dispatching entry points below.
Isa active_isa();

// Throws std::invalid_argument if the variant is not supported here.
void set_isa(Isa isa);

// Flattened monomial list: exponents are stored row-major, one row of
// `dim` entries per term.
struct TermTable {
  int dim = 0;
  std::vector<std::uint8_t> exponents;
  std::vector<double> coeffs;

  std::size_t size() const { return coeffs.size(); }
};

// Sum of a[i] * b[i].
double dot(std::span<const double> a, std::span<const double> b);

// Evaluates sum_k coeffs[k] * x^alpha_k at npts points.
// coords holds the points axis-major: coords[axis * npts + p].
void eval_poly(const TermTable& terms, std::span<const double> coords,
               std::size_t npts, std::span<double> out);

// Evaluates every monomial of `terms` (coefficients ignored) at npts points.
// out is column-major npts x terms.size(): out[k * npts + p] = x_p^alpha_k.
void eval_monomials(const TermTable& terms, std::span<const double> coords,
                    std::size_t npts, std::span<double> out);

// Per-variant entry points, exposed for equivalence testing.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void eval_poly(const TermTable& terms, const double* coords, std::size_t npts,
               double* out);
void eval_monomials(const TermTable& terms, const double* coords,
                    std::size_t npts, double* out);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void eval_poly(const TermTable& terms, const double* coords, std::size_t npts,
               double* out);
void eval_monomials(const TermTable& terms, const double* coords,
                    std::size_t npts, double* out);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void eval_poly(const TermTable& terms, const double* coords, std::size_t npts,
               double* out);
void eval_monomials(const TermTable& terms, const double* coords,
                    std::size_t npts, double* out);
}  // namespace neon

}  // namespace momlab::kernels
