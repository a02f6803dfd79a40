#include "momlab/hierarchy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "momlab/errors.hpp"
#include "relaxation.hpp"

namespace momlab {

Polynomial SosCertificate::sos(std::size_t i) const {
  const int n = target.dim();
  Polynomial out(n);
  const auto& basis = bases.at(i);
  const auto& g = grams.at(i);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      out.add_term(basis[a] + basis[b], g(a, b));
    }
  }
  return out;
}

Polynomial SosCertificate::expand() const {
  Polynomial out(target.dim());
  for (std::size_t i = 0; i < grams.size(); ++i) {
    if (grams[i].size() == 0) continue;
    out += sos(i) * multipliers[i];
  }
  return out;
}

double SosCertificate::compute_residual() const {
  return coeff_norm(target - normalizer * s - expand());
}

double SosCertificate::min_gram_eigenvalue() const {
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& g : grams) {
    if (g.size() == 0) continue;
    lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff());
  }
  return lmin;
}

int truncation_degree(int level) {
  if (level < 0) throw InvalidArgument("negative relaxation level");
  return 2 * ((level + 1) / 2);
}

namespace {

detail::RelaxationSpec relaxation_spec(const SemialgebraicProblem& prob, int d) {
  prob.validate();
  if (d < prob.max_degree()) {
    throw InvalidArgument("level " + std::to_string(d) + " is below the problem degree " +
                          std::to_string(prob.max_degree()));
  }
  detail::RelaxationSpec spec;
  spec.objective = prob.objective;
  spec.constraints = prob.all_constraints();
  spec.degree = truncation_degree(d);
  spec.normalizer = Polynomial::constant(prob.n, 1.0);
  return spec;
}

}  // namespace

SdpProblem build_relaxation_sdp(const SemialgebraicProblem& prob, int d) {
  return detail::build(relaxation_spec(prob, d)).sdp;
}

RelaxationResult solve_moment_relaxation(const SemialgebraicProblem& prob, int d,
                                         const SdpOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto spec = relaxation_spec(prob, d);
  const auto built = detail::build(spec);
  const SdpSolution sol = solve(built.sdp, opts);

  RelaxationResult r;
  r.level = d;
  r.truncation = spec.degree;
  r.status = sol.status;
  r.message = sol.message;
  r.iterations = sol.iterations;
  if (!sol.optimal()) {
    throw SolverFailure("level " + std::to_string(d) + ": " + to_string(sol.status) +
                        (sol.message.empty() ? "" : " (" + sol.message + ")"));
  }
  r.m_star = sol.primal_objective;
  r.f_star = sol.dual_objective;
  r.pseudo_moments = PseudoMomentSequence(prob.n, spec.degree, sol.x);
  r.certificate = detail::certificate(spec, built, sol);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::pair<double, SosCertificate> solve_sos_tightening(const SemialgebraicProblem& prob, int d,
                                                       const SdpOptions& opts) {
  RelaxationResult r = solve_moment_relaxation(prob, d, opts);
  return {r.f_star, std::move(*r.certificate)};
}

MembershipResult qmodule_membership(const Polynomial& q, const SemialgebraicProblem& prob, int d,
                                    const SdpOptions& opts) {
  prob.validate();
  if (q.dim() != prob.n) throw DimensionMismatch("polynomial dimension mismatch");
  if (d < 0) throw InvalidArgument("negative truncation degree");
  MembershipResult out;
  if (q.degree() > d) {
    out.status = SdpStatus::Infeasible;
    out.message = "degree of q exceeds the truncation";
    out.margin = -std::numeric_limits<double>::infinity();
    return out;
  }

  detail::RelaxationSpec spec;
  spec.objective = q;
  spec.constraints = prob.all_constraints();
  spec.degree = d;
  spec.normalizer = sum_of_squared_monomials(prob.n, d / 2);
  const auto built = detail::build(spec);
  const SdpSolution sol = solve(built.sdp, opts);
  out.status = sol.status;
  out.message = sol.message;

  if (sol.status == SdpStatus::Infeasible) {
    // An unbounded moment side means q - t e leaves Q_d(p) for every t; an
    // empty one means every polynomial is a member.
    const bool unbounded = sol.message.rfind("unbounded", 0) == 0;
    out.member = !unbounded;
    out.margin = unbounded ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    return out;
  }
  if (!sol.optimal()) {
    throw SolverFailure(std::string("membership test: ") + to_string(sol.status) +
                        (sol.message.empty() ? "" : " (" + sol.message + ")"));
  }
  out.margin = sol.primal_objective;
  out.member = out.margin >= -kMembershipTol;
  if (out.member) {
    SosCertificate cert = detail::certificate(spec, built, sol);
    // q = (q - t e) + t e and e is the identity Gram over the moment basis.
    cert.grams[0] += cert.s * Eigen::MatrixXd::Identity(cert.grams[0].rows(), cert.grams[0].cols());
    cert.s = 0.0;
    cert.residual = cert.compute_residual();
    out.certificate = std::move(cert);
  }
  return out;
}

std::optional<int> compute_d0(const SemialgebraicProblem& prob, int d_max, const SdpOptions& opts) {
  const auto cons = prob.all_constraints();
  for (int k = 0; k <= d_max; ++k) {
    bool all = true;
    for (const auto& p : cons) {
      const Polynomial q = Polynomial::constant(prob.n, 1.0) - p;
      if (q.degree() > k || !qmodule_membership(q, prob, k, opts).member) {
        all = false;
        break;
      }
    }
    if (all) return k;
  }
  return std::nullopt;
}

std::vector<RelaxationResult> run_hierarchy(const SemialgebraicProblem& prob, int d_min, int d_max,
                                            const SdpOptions& opts) {
  if (d_min > d_max) throw InvalidArgument("empty level range");
  std::vector<RelaxationResult> out;
  for (int d = d_min; d <= d_max; ++d) {
    try {
      out.push_back(solve_moment_relaxation(prob, d, opts));
    } catch (const SolverFailure& e) {
      RelaxationResult r;
      r.level = d;
      r.truncation = truncation_degree(d);
      r.status = SdpStatus::IllConditioned;
      r.m_star = std::numeric_limits<double>::quiet_NaN();
      r.f_star = std::numeric_limits<double>::quiet_NaN();
      r.message = e.what();
      // Recover the status name from the annotated message.
      for (SdpStatus s : {SdpStatus::Infeasible, SdpStatus::MaxIter, SdpStatus::IllConditioned}) {
        if (r.message.find(to_string(s)) != std::string::npos) r.status = s;
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

bool is_monotone(const std::vector<RelaxationResult>& results, double tol) {
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (!r.ok()) continue;
    if (r.m_star < prev - tol) return false;
    prev = std::max(prev, r.m_star);
  }
  return true;
}

PseudoMomentSequence map_to_original(const PseudoMomentSequence& y, const AffineScale& scale) {
  const int n = y.dim();
  if (scale.center.size() != n) throw DimensionMismatch("scale record dimension mismatch");
  const std::span<const double> c(scale.center.data(), n);
  const std::span<const double> s(scale.scale.data(), n);
  PseudoMomentSequence out(n, y.order());
  const auto& basis = out.basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    // x^alpha with x = c + s u, integrated against L in u.
    out.values()[k] = y.apply(compose_affine(Polynomial::monomial(basis[k]), c, s));
  }
  return out;
}

}  // namespace momlab
