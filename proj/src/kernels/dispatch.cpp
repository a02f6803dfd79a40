#include <atomic>
#include <stdexcept>
#include <string>

#include "momlab/kernels.hpp"

namespace momlab::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*eval_poly)(const TermTable&, const double*, std::size_t, double*);
  void (*eval_monomials)(const TermTable&, const double*, std::size_t, double*);
};

Table table_for(Isa isa) {
  switch (isa) {
#if defined(MOMLAB_HAVE_AVX2)
    case Isa::Avx2:
      return {&avx2::dot, &avx2::eval_poly, &avx2::eval_monomials};
#endif
#if defined(MOMLAB_HAVE_NEON)
    case Isa::Neon:
      return {&neon::dot, &neon::eval_poly, &neon::eval_monomials};
#endif
    default:
      return {&scalar::dot, &scalar::eval_poly, &scalar::eval_monomials};
  }
}

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(MOMLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(MOMLAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa initial_isa() {
  if (cpu_has(Isa::Avx2)) return Isa::Avx2;
  if (cpu_has(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) { return cpu_has(isa); }

Isa best_isa() { return initial_isa(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!cpu_has(isa)) {
    throw std::invalid_argument("kernel variant not available: " +
                                std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  return table_for(active_isa()).dot(a.data(), b.data(), a.size());
}

void eval_poly(const TermTable& terms, std::span<const double> coords,
               std::size_t npts, std::span<double> out) {
  if (coords.size() < static_cast<std::size_t>(terms.dim) * npts ||
      out.size() < npts) {
    throw std::invalid_argument("eval_poly: buffer too small");
  }
  table_for(active_isa()).eval_poly(terms, coords.data(), npts, out.data());
}

void eval_monomials(const TermTable& terms, std::span<const double> coords,
                    std::size_t npts, std::span<double> out) {
  const std::size_t nterms =
      terms.dim > 0 ? terms.exponents.size() / terms.dim : terms.coeffs.size();
  if (coords.size() < static_cast<std::size_t>(terms.dim) * npts ||
      out.size() < npts * nterms) {
    throw std::invalid_argument("eval_monomials: buffer too small");
  }
  table_for(active_isa()).eval_monomials(terms, coords.data(), npts,
                                         out.data());
}

}  // namespace momlab::kernels
