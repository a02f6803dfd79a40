#include "momlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "momlab/errors.hpp"

namespace momlab {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw InvalidArgument("negative exponent in multi-index");
    degree_ += e;
  }
}

MultiIndex MultiIndex::zero(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

MultiIndex MultiIndex::unit(int dim, int axis) {
  std::vector<int> e(dim, 0);
  e.at(axis) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("multi-index dimension mismatch");
  std::vector<int> e(exps_);
  for (int i = 0; i < dim(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

double MultiIndex::eval(std::span<const double> x) const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < exps_[i]; ++j) v *= x[i];
  }
  return v;
}

bool GradedLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto& ea = a.exponents();
  const auto& eb = b.exponents();
  return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int e : a.exponents()) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t basis_size(int dim, int degree) {
  if (degree < 0) return 0;
  // C(dim + degree, degree) computed incrementally; exact in integers.
  std::size_t r = 1;
  for (int k = 1; k <= degree; ++k) r = r * static_cast<std::size_t>(dim + k) / k;
  return r;
}

namespace {

// Exponent vectors of total degree `deg`, leading exponent descending.
void exact_degree(int dim, int deg, std::vector<int>& cur, int axis,
                  std::vector<MultiIndex>& out) {
  if (axis == dim - 1) {
    cur[axis] = deg;
    out.emplace_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[axis] = e;
    exact_degree(dim, deg - e, cur, axis + 1, out);
  }
  cur[axis] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1) throw InvalidArgument("basis dimension must be positive");
  if (degree < 0) throw InvalidArgument("basis degree must be nonnegative");
  elems_.reserve(basis_size(dim, degree));
  std::vector<int> cur(dim, 0);
  for (int d = 0; d <= degree; ++d) exact_degree(dim, d, cur, 0, elems_);
  index_.reserve(elems_.size());
  for (std::size_t k = 0; k < elems_.size(); ++k) index_.emplace(elems_[k], static_cast<long>(k));
}

long MonomialBasis::index_of(const MultiIndex& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd MonomialBasis::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("point dimension mismatch");
  Eigen::VectorXd v(elems_.size());
  for (std::size_t k = 0; k < elems_.size(); ++k) v[k] = elems_[k].eval(x);
  return v;
}

kernels::TermTable MonomialBasis::term_table() const {
  kernels::TermTable t;
  t.dim = dim_;
  t.exponents.reserve(elems_.size() * dim_);
  for (const auto& a : elems_) {
    for (int e : a.exponents()) t.exponents.push_back(static_cast<std::uint8_t>(e));
  }
  t.coeffs.assign(elems_.size(), 1.0);
  return t;
}

Polynomial::Polynomial(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidArgument("polynomial dimension must be positive");
}

Polynomial::Polynomial(int dim,
                       std::initializer_list<std::pair<std::vector<int>, double>> terms)
    : Polynomial(dim) {
  for (const auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != dim) throw DimensionMismatch("term dimension mismatch");
    add_term(MultiIndex(e), c);
  }
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.add_term(MultiIndex::zero(dim), c);
  return p;
}

Polynomial Polynomial::variable(int dim, int axis) {
  Polynomial p(dim);
  p.add_term(MultiIndex::unit(dim, axis), 1.0);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double c) {
  Polynomial p(alpha.dim());
  p.add_term(alpha, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
  return d;
}

double Polynomial::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
  if (alpha.dim() != dim_) throw DimensionMismatch("term dimension mismatch");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Polynomial::require_same_dim(const Polynomial& other) const {
  if (dim_ != other.dim_) {
    throw DimensionMismatch("polynomial dimension mismatch: " + std::to_string(dim_) +
                            " vs " + std::to_string(other.dim_));
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_dim(other);
  for (const auto& [a, c] : other.terms_) add_term(a, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_dim(other);
  for (const auto& [a, c] : other.terms_) add_term(a, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_dim(b);
  Polynomial out(a.dim());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  }
  return out;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw InvalidArgument("negative polynomial power");
  Polynomial result = constant(dim_, 1.0);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("point dimension mismatch");
  double v = 0.0;
  for (const auto& [a, c] : terms_) v += c * a.eval(x);
  return v;
}

kernels::TermTable Polynomial::term_table() const {
  kernels::TermTable t;
  t.dim = dim_;
  t.exponents.reserve(terms_.size() * dim_);
  t.coeffs.reserve(terms_.size());
  for (const auto& [a, c] : terms_) {
    for (int e : a.exponents()) {
      if (e > 255) throw DegreeOverflow("exponent exceeds kernel range");
      t.exponents.push_back(static_cast<std::uint8_t>(e));
    }
    t.coeffs.push_back(c);
  }
  return t;
}

double coeff_norm(const Polynomial& p) {
  double s = 0.0;
  for (const auto& [a, c] : p.terms()) s += c * c;
  return std::sqrt(s);
}

std::vector<double> eval_points(const Polynomial& p, std::span<const double> coords,
                                std::size_t npts) {
  std::vector<double> out(npts);
  if (npts == 0) return out;
  kernels::eval_poly(p.term_table(), coords, npts, out);
  return out;
}

namespace {

constexpr std::size_t kFullGridBudget = std::size_t{1} << 22;
constexpr std::size_t kSampleCount = 100000;
constexpr std::size_t kChunk = 4096;

double max_abs_over_chunked(const Polynomial& p, std::size_t total,
                            const auto& fill_point) {
  const int n = p.dim();
  const kernels::TermTable table = p.term_table();
  std::vector<double> coords(n * kChunk);
  std::vector<double> vals(kChunk);
  std::vector<double> x(n);
  double best = 0.0;
  for (std::size_t start = 0; start < total; start += kChunk) {
    const std::size_t m = std::min(kChunk, total - start);
    for (std::size_t q = 0; q < m; ++q) {
      fill_point(start + q, x);
      for (int i = 0; i < n; ++i) coords[i * m + q] = x[i];
    }
    kernels::eval_poly(table, std::span<const double>(coords.data(), n * m), m,
                       std::span<double>(vals.data(), m));
    for (std::size_t q = 0; q < m; ++q) best = std::max(best, std::abs(vals[q]));
  }
  return best;
}

}  // namespace

double sup_norm_box(const Polynomial& p, int grid_per_axis) {
  if (grid_per_axis < 2) throw InvalidArgument("sup_norm_box needs at least 2 points per axis");
  if (p.is_zero()) return 0.0;
  const int n = p.dim();
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= grid_per_axis;
  const double step = 2.0 / (grid_per_axis - 1);

  if (n <= 6 && total <= static_cast<double>(kFullGridBudget)) {
    return max_abs_over_chunked(p, static_cast<std::size_t>(total),
                                [&](std::size_t idx, std::vector<double>& x) {
                                  for (int i = 0; i < n; ++i) {
                                    const std::size_t k = idx % grid_per_axis;
                                    idx /= grid_per_axis;
                                    x[i] = -1.0 + step * static_cast<double>(k);
                                  }
                                });
  }

  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> samples(kSampleCount * n);
  for (double& s : samples) s = unif(rng);
  const std::size_t corners = n < 20 ? (std::size_t{1} << n) : 0;
  return max_abs_over_chunked(p, kSampleCount + corners,
                              [&](std::size_t idx, std::vector<double>& x) {
                                if (idx < kSampleCount) {
                                  for (int i = 0; i < n; ++i) x[i] = samples[idx * n + i];
                                } else {
                                  const std::size_t c = idx - kSampleCount;
                                  for (int i = 0; i < n; ++i) x[i] = (c >> i) & 1 ? 1.0 : -1.0;
                                }
                              });
}

Polynomial compose_affine(const Polynomial& p, std::span<const double> center,
                          std::span<const double> scale) {
  const int n = p.dim();
  if (static_cast<int>(center.size()) != n || static_cast<int>(scale.size()) != n) {
    throw DimensionMismatch("affine map dimension mismatch");
  }
  std::vector<Polynomial> axis_map;
  axis_map.reserve(n);
  for (int i = 0; i < n; ++i) {
    axis_map.push_back(Polynomial::constant(n, center[i]) +
                       Polynomial::variable(n, i) * scale[i]);
  }
  Polynomial out(n);
  for (const auto& [a, c] : p.terms()) {
    Polynomial term = Polynomial::constant(n, c);
    for (int i = 0; i < n; ++i) {
      if (a[i] > 0) term = term * axis_map[i].pow(a[i]);
    }
    out += term;
  }
  return out;
}

Polynomial sum_of_squared_monomials(int dim, int t) {
  MonomialBasis basis(dim, t);
  Polynomial out(dim);
  for (const auto& a : basis.elements()) out.add_term(a + a, 1.0);
  return out;
}

}  // namespace momlab
