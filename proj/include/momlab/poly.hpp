#pragma once

// Sparse multivariate polynomials over a graded monomial index.

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "momlab/kernels.hpp"

namespace momlab {

using Point = Eigen::VectorXd;

// Exponent vector alpha in N^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int axis);

  int dim() const { return static_cast<int>(exps_.size()); }
  int degree() const { return degree_; }
  int operator[](int axis) const { return exps_[axis]; }
  const std::vector<int>& exponents() const { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;

  // x^alpha
  double eval(std::span<const double> x) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.exps_ == b.exps_;
  }

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

// Graded order: lower total degree first; within a degree, larger leading
// exponents first (1, x1, x2, x1^2, x1 x2, x2^2, ...).
struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const;
};

// binomial(n + d, d): dimension of the polynomials of degree <= d.
std::size_t basis_size(int dim, int degree);

// All monomials of degree <= d in graded order. Row/column k of every
// moment matrix refers to element k of this list.
class MonomialBasis {
 public:
  MonomialBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return elems_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return elems_[k]; }
  const std::vector<MultiIndex>& elements() const { return elems_; }

  // -1 when alpha is not in the basis.
  long index_of(const MultiIndex& alpha) const;

  // Number of basis elements of degree <= d (a prefix of the list).
  std::size_t prefix_size(int d) const { return basis_size(dim_, d); }

  // Monomial vector v(x) = (x^alpha)_alpha.
  Eigen::VectorXd evaluate(std::span<const double> x) const;

  kernels::TermTable term_table() const;

 private:
  int dim_;
  int degree_;
  std::vector<MultiIndex> elems_;
  std::unordered_map<MultiIndex, long, MultiIndexHash> index_;
};

class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double, GradedLess>;

  explicit Polynomial(int dim = 1);
  Polynomial(int dim,
             std::initializer_list<std::pair<std::vector<int>, double>> terms);

  static Polynomial constant(int dim, double c);
  static Polynomial variable(int dim, int axis);
  static Polynomial monomial(const MultiIndex& alpha, double c = 1.0);

  int dim() const { return dim_; }
  // Zero polynomial has degree 0.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  double coeff(const MultiIndex& alpha) const;

  // Adds c * X^alpha; exact zeros are never stored.
  void add_term(const MultiIndex& alpha, double c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const { return *this * -1.0; }

  Polynomial pow(int k) const;

  double operator()(std::span<const double> x) const;
  double operator()(const Point& x) const {
    return (*this)(std::span<const double>(x.data(), x.size()));
  }

  kernels::TermTable term_table() const;

 private:
  void require_same_dim(const Polynomial& other) const;

  int dim_;
  Terms terms_;
};

double coeff_norm(const Polynomial& p);

// Lower estimate of max |p| over [-1,1]^n. A full tensor grid is used when
// n <= 6 and grid_per_axis^n stays below ~4.2e6 points; otherwise 1e5
// seeded uniform samples plus the box corners. For a fixed n the full grid
// estimate is nondecreasing under nested refinement g -> k(g-1)+1.
double sup_norm_box(const Polynomial& p, int grid_per_axis = 64);

// p(center + scale .* u) as a polynomial in u.
Polynomial compose_affine(const Polynomial& p, std::span<const double> center,
                          std::span<const double> scale);

// Batched evaluation of p at the points of an axis-major coordinate buffer
// (see kernels::eval_poly).
std::vector<double> eval_points(const Polynomial& p,
                                std::span<const double> coords,
                                std::size_t npts);

// 1 + x1^2 + ... : sum of squares of the basis monomials of degree <= t.
Polynomial sum_of_squared_monomials(int dim, int t);

}  // namespace momlab
