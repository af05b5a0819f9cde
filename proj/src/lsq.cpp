#include "hdelm/lsq.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hdelm/errors.hpp"
#include "hdelm/rng.hpp"

namespace hdelm {

namespace {

lapack_int to_lapack(Index n) {
  if (n > std::numeric_limits<lapack_int>::max()) throw InvalidArgument("matrix dimension exceeds LAPACK index range");
  return static_cast<lapack_int>(n);
}

struct ThinSvd {
  Matrix u;   // N x k
  Vector s;   // k, descending
  Matrix vt;  // k x M
};

ThinSvd thin_svd(Matrix a) {
  const lapack_int m = to_lapack(a.rows()), n = to_lapack(a.cols());
  const lapack_int k = std::min(m, n);
  ThinSvd out{Matrix(m, k), Vector(k), Matrix(k, n)};
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m, out.s.data(), out.u.data(), m,
                                         out.vt.data(), k);
  if (info != 0) throw std::runtime_error("dgesdd failed with info " + std::to_string(info));
  return out;
}

double half_sq(const Vector& r) { return 0.5 * r.squaredNorm(); }

}  // namespace

double default_rcond(Index rows, Index cols) {
  return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
}

SolveResult min_norm_lsq(const Matrix& a, const Vector& b) {
  if (a.rows() < 1 || a.cols() < 1) throw InvalidArgument("min_norm_lsq: empty matrix");
  if (b.size() != a.rows()) throw InvalidArgument("min_norm_lsq: rhs length mismatch");
  if (!a.allFinite() || !b.allFinite()) throw InvalidArgument("min_norm_lsq: non-finite input");

  const lapack_int m = to_lapack(a.rows()), n = to_lapack(a.cols());
  const lapack_int ldb = std::max(m, n);
  Matrix work = a;
  Vector rhs = Vector::Zero(ldb);
  rhs.head(m) = b;
  Vector s(std::min(m, n));
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, work.data(), m, rhs.data(), ldb, s.data(),
                                         default_rcond(m, n), &rank);
  if (info != 0) throw std::runtime_error("dgelsd failed with info " + std::to_string(info));

  SolveResult out;
  out.phi = rhs.head(n);
  out.residual_norm = (a * out.phi - b).norm();
  out.rank = rank;
  out.converged = true;
  return out;
}

void NllsqOptions::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(step_tol > 0 && residual_tol > 0 && cost_tol > 0)) throw InvalidArgument("tolerances must be > 0");
  if (!(shrink > 0 && shrink < 1) || !(expand > 1)) throw InvalidArgument("trust-region factors out of range");
  if (!(eta_low >= 0 && eta_low < eta_high && eta_high < 1)) throw InvalidArgument("acceptance thresholds out of range");
  if (!(perturb >= 0)) throw InvalidArgument("perturbation magnitude must be >= 0");
  if (max_restarts < 0) throw InvalidArgument("max_restarts must be >= 0");
}

SolveResult gauss_newton_trust(const ResidualFn& residual, const JacobianFn& jacobian, const Vector& phi0,
                               const NllsqOptions& options) {
  options.validate();
  Vector phi = phi0;
  Vector r = residual(phi);
  if (!r.allFinite()) throw InvalidArgument("gauss_newton_trust: non-finite residual at the initial point");
  double cost = half_sq(r);
  double radius = options.initial_radius;

  SolveResult out;
  bool done = false;
  while (!done && out.iterations < options.max_iterations) {
    if (r.norm() <= options.residual_tol) {
      out.converged = true;
      break;
    }
    const Matrix jac = jacobian(phi);
    if (jac.rows() != r.size() || jac.cols() != phi.size())
      throw InvalidArgument("gauss_newton_trust: Jacobian shape does not match residual/parameters");
    if (!jac.allFinite()) break;
    const ThinSvd svd = thin_svd(jac);
    const double cut = svd.s.size() ? default_rcond(jac.rows(), jac.cols()) * svd.s(0) : 0.0;
    Index k = 0;
    while (k < svd.s.size() && svd.s(k) > cut) ++k;
    out.rank = k;
    const Vector c = svd.u.leftCols(k).transpose() * r;
    const Vector s = svd.s.head(k);

    // Coefficients of delta(lambda) in the right singular basis.
    auto coeffs = [&](double lambda) -> Vector {
      return -(s.array() * c.array() / (s.array().square() + lambda)).matrix();
    };
    const Vector gn = coeffs(0.0);
    const double gn_norm = gn.norm();
    if (radius <= 0) radius = gn_norm > 0 ? gn_norm : 1.0;

    // Inner loop: shrink the radius until a step is accepted or the step is negligible.
    while (out.iterations < options.max_iterations) {
      ++out.iterations;
      Vector a = gn;
      bool on_boundary = false;
      if (gn_norm > radius) {
        on_boundary = true;
        double lo = 0.0, hi = s.size() ? s(0) * s(0) : 1.0;
        while (coeffs(hi).norm() > radius) hi *= 4.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = lo > 0 ? std::sqrt(lo * hi) : 0.5 * hi;
          (coeffs(mid).norm() > radius ? lo : hi) = mid;
        }
        a = coeffs(hi);
      }
      const Vector delta = svd.vt.topRows(k).transpose() * a;
      const double step = delta.norm();
      const double scale = options.step_tol * (phi.norm() + options.step_tol);
      if (step <= scale) {
        out.converged = true;
        done = true;
        break;
      }
      const double pred = 0.5 * (c.squaredNorm() - (c.array() + s.array() * a.array()).matrix().squaredNorm());
      const Vector trial = phi + delta;
      const Vector r_trial = residual(trial);
      const double cost_trial = r_trial.allFinite() ? half_sq(r_trial) : std::numeric_limits<double>::infinity();
      const double rho = pred > 0 ? (cost - cost_trial) / pred : -1.0;

      if (rho < options.eta_low) radius = options.shrink * std::min(radius, step);
      else if (rho > options.eta_high && on_boundary) radius *= options.expand;

      if (rho > options.eta_low) {
        const double reduction = cost - cost_trial;
        phi = trial;
        r = r_trial;
        cost = cost_trial;
        if (reduction <= options.cost_tol * (cost + reduction)) {
          out.converged = true;
          done = true;
        }
        break;
      }
      if (radius <= scale) {
        out.converged = true;
        done = true;
        break;
      }
    }
  }
  if (!out.converged && r.norm() <= options.residual_tol) out.converged = true;
  out.phi = phi;
  out.residual_norm = residual(phi).norm();
  return out;
}

SolveResult nllsq_perturb(const ResidualFn& residual, const JacobianFn& jacobian, Index n_params,
                          const NllsqOptions& options) {
  options.validate();
  if (n_params < 1) throw InvalidArgument("nllsq_perturb: no parameters");
  SolveResult best = gauss_newton_trust(residual, jacobian, Vector::Zero(n_params), options);
  const double threshold = options.restart_threshold >= 0
                               ? options.restart_threshold
                               : 1e-10 * static_cast<double>(residual(best.phi).size());
  int total_iterations = best.iterations;
  UniformSource rng(derive_seed(options.seed, 0x5eed));
  int restarts = 0;
  while (0.5 * best.residual_norm * best.residual_norm > threshold && restarts < options.max_restarts) {
    ++restarts;
    const double magnitude = options.perturb * std::max(best.phi.lpNorm<Eigen::Infinity>(), 1.0);
    Vector start = best.phi;
    for (Index i = 0; i < start.size(); ++i) start(i) += magnitude * rng.closed(-1.0, 1.0);
    SolveResult trial = gauss_newton_trust(residual, jacobian, start, options);
    total_iterations += trial.iterations;
    if (trial.residual_norm < best.residual_norm) best = std::move(trial);
  }
  best.iterations = total_iterations;
  best.restarts = restarts;
  return best;
}

}  // namespace hdelm
