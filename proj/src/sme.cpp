#include "dirsme/sme.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dirsme/errors.hpp"

namespace dirsme {

void accumulate_point(const Eigen::VectorXd& x, const StatSpec& spec, Eigen::MatrixXd& W,
                      Eigen::VectorXd& d) {
  const Eigen::MatrixXd grad = spec.gradients(x);
  if (spec.geometry() == Geometry::Sphere) {
    // (P u_a)^T (P u_b) = u_a^T u_b - (z^T u_a)(z^T u_b).
    const Eigen::VectorXd v = grad * x;
    W.noalias() += grad * grad.transpose();
    W.noalias() -= v * v.transpose();
  } else {
    W.noalias() += grad * grad.transpose();
  }
  d -= spec.laplacians(x);
}

MomentPair accumulate(const Eigen::MatrixXd& samples, const StatSpec& spec) {
  if (samples.cols() != spec.dim())
    throw ValidationError("samples have " + std::to_string(samples.cols()) +
                          " columns but the statistics expect " + std::to_string(spec.dim()));
  if (samples.rows() < 1) throw ValidationError("need at least one observation");
  const int m = spec.size();
  MomentPair mp{Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m), samples.rows()};
  Eigen::VectorXd x(samples.cols());
  for (Eigen::Index h = 0; h < samples.rows(); ++h) {
    x = samples.row(h).transpose();
    accumulate_point(x, spec, mp.W, mp.d);
  }
  const double inv_n = 1.0 / static_cast<double>(samples.rows());
  mp.W *= inv_n;
  mp.d *= inv_n;
  // Symmetric by construction; remove reassociation noise.
  mp.W = 0.5 * (mp.W + mp.W.transpose()).eval();
  return mp;
}

double check_pd(const MomentPair& mp) {
  if (mp.W.rows() == 0) throw ValidationError("empty moment matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mp.W, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double pd_threshold(const MomentPair& mp) {
  return 1e-10 * mp.W.trace() / static_cast<double>(mp.W.rows());
}

double condition_number(const MomentPair& mp) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mp.W, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (!(ev[0] > 0.0)) return std::numeric_limits<double>::infinity();
  return ev[ev.size() - 1] / ev[0];
}

NaturalParams solve(const MomentPair& mp) {
  if (mp.W.rows() != mp.W.cols() || mp.W.rows() != mp.d.size())
    throw ValidationError("moment pair has inconsistent dimensions");
  const double min_eig = check_pd(mp);
  const double threshold = pd_threshold(mp);
  if (!(min_eig > threshold) || !(threshold >= 0.0)) throw SingularW(min_eig, threshold);

  Eigen::LLT<Eigen::MatrixXd> llt(mp.W);
  if (llt.info() != Eigen::Success) throw SingularW(min_eig, threshold);
  Eigen::VectorXd pi = llt.solve(mp.d);
  // One step of iterative refinement for nearly singular W.
  const Eigen::VectorXd residual = mp.d - mp.W * pi;
  if (residual.norm() > 1e-12 * mp.d.norm()) pi += llt.solve(residual);
  return {pi};
}

double objective(const NaturalParams& params, const MomentPair& mp) {
  if (params.pi.size() != mp.d.size()) throw ValidationError("parameter dimension mismatch");
  return 0.5 * params.pi.dot(mp.W * params.pi) - params.pi.dot(mp.d);
}

}  // namespace dirsme
