#include "dirsme/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dirsme/errors.hpp"
#include "dirsme/statspecs.hpp"

namespace dirsme {

namespace {

constexpr double kZeroResultant = 1e-12;
constexpr double kDegenerateW = 1e-12;

void require_sphere_data(const Eigen::MatrixXd& Z, int min_q = 2) {
  if (Z.rows() < 1) throw ValidationError("need at least one observation");
  if (Z.cols() < min_q)
    throw ValidationError("sphere data need at least " + std::to_string(min_q) + " columns");
}

bool is_orthogonal(const Eigen::MatrixXd& M, double tol) {
  if (M.rows() != M.cols()) return false;
  return (M.transpose() * M - Eigen::MatrixXd::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff() <=
         tol;
}

}  // namespace

// --- parameter types ----------------------------------------------------------

void FisherBinghamParams::validate() const {
  const auto q = b.size();
  if (q < 2 || A.rows() != q || A.cols() != q)
    throw ValidationError("Fisher-Bingham parameters need b of length q and A q x q");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("Fisher-Bingham A must be symmetric");
  if (std::abs(A.trace()) > 1e-12) throw ValidationError("Fisher-Bingham A must have trace 0");
}

Eigen::VectorXd FisherBinghamParams::natural() const {
  const int q = static_cast<int>(b.size());
  Eigen::VectorXd pi(q + (q - 1) + q * (q - 1) / 2);
  int l = 0;
  for (int j = 0; j < q; ++j) pi[l++] = b[j];
  for (int j = 0; j + 1 < q; ++j) pi[l++] = A(j, j);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) pi[l++] = A(i, j);
  return pi;
}

FisherBinghamParams FisherBinghamParams::from_natural(int q, const Eigen::VectorXd& pi) {
  if (pi.size() != q + (q - 1) + q * (q - 1) / 2)
    throw ValidationError("wrong number of Fisher-Bingham natural parameters");
  FisherBinghamParams p{Eigen::VectorXd(q), Eigen::MatrixXd::Zero(q, q)};
  int l = 0;
  for (int j = 0; j < q; ++j) p.b[j] = pi[l++];
  double diag_sum = 0.0;
  for (int j = 0; j + 1 < q; ++j) {
    p.A(j, j) = pi[l++];
    diag_sum += p.A(j, j);
  }
  p.A(q - 1, q - 1) = -diag_sum;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      p.A(i, j) = pi[l];
      p.A(j, i) = pi[l];
      ++l;
    }
  }
  return p;
}

void BinghamParams::validate() const {
  const auto q = lambda.size();
  if (q < 2 || Gamma.rows() != q || Gamma.cols() != q)
    throw ValidationError("Bingham parameters need q x q Gamma and q concentrations");
  if (!is_orthogonal(Gamma, 1e-10)) throw ValidationError("Bingham Gamma must be orthogonal");
  if (std::abs(lambda.sum()) > 1e-12) throw ValidationError("Bingham concentrations must sum to 0");
}

void KentParams::validate() const {
  if (!is_orthogonal(Gamma, 1e-10)) throw ValidationError("Kent Gamma must be orthogonal");
  if (!(kappa >= 0.0) || !(beta >= 0.0) || !std::isfinite(kappa) || !std::isfinite(beta))
    throw ValidationError("Kent kappa and beta must be finite and nonnegative");
}

void SineModelParams::validate() const {
  const auto k = kappa.size();
  if (k < 1) throw ValidationError("sine model needs k >= 1");
  if (theta0.size() != k || Lambda.rows() != k || Lambda.cols() != k)
    throw ValidationError("sine model needs theta0 of length k and a k x k Lambda");
  if ((kappa.array() < 0.0).any() || !kappa.allFinite())
    throw ValidationError("sine model concentrations must be finite and nonnegative");
  if ((Lambda - Lambda.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("sine model Lambda must be symmetric");
  if (Lambda.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw ValidationError("sine model Lambda must have a zero diagonal");
}

Eigen::VectorXd SineModelParams::natural() const {
  const int kk = k();
  Eigen::VectorXd pi(kk + kk * (kk - 1) / 2);
  pi.head(kk) = kappa;
  int l = kk;
  for (int r = 0; r < kk; ++r)
    for (int s = r + 1; s < kk; ++s) pi[l++] = Lambda(r, s);
  return pi;
}

// --- orientation -----------------------------------------------------------------

Eigen::MatrixXd rotation_to_e1(const UnitVector& mu) {
  const int q = mu.dim();
  Eigen::VectorXd w = mu.coords();
  const bool flip = w[0] >= 0.0;
  // w = mu + e1 maps mu to -e1 (then the first axis is flipped); w = mu - e1
  // maps mu to e1. Either way |w_1| >= 1, so there is no cancellation.
  w[0] += flip ? 1.0 : -1.0;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(q, q) - (2.0 / w.squaredNorm()) * w * w.transpose();
  if (flip) H.col(0) *= -1.0;
  return H;
}

Standardized vmf_orientation(const Eigen::MatrixXd& Z) {
  require_sphere_data(Z);
  const Eigen::VectorXd zbar = Z.colwise().mean().transpose();
  if (zbar.norm() <= kZeroResultant) throw ZeroResultant();
  Eigen::MatrixXd R = rotation_to_e1(UnitVector(zbar));
  Eigen::MatrixXd Y = Z * R;
  return {std::move(R), std::move(Y)};
}

BinghamStandardized bingham_standardize(const Eigen::MatrixXd& Z) {
  require_sphere_data(Z);
  const int q = static_cast<int>(Z.cols());
  const Eigen::MatrixXd T = Z.transpose() * Z / static_cast<double>(Z.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition of T failed");

  BinghamStandardized out{Eigen::MatrixXd(q, q), Eigen::MatrixXd(), Eigen::VectorXd(q)};
  for (int j = 0; j < q; ++j) {
    // Eigen returns ascending eigenvalues.
    out.eigenvalues[j] = es.eigenvalues()[q - 1 - j];
    Eigen::VectorXd v = es.eigenvectors().col(q - 1 - j);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v[big] < 0.0) v = -v;
    out.G.col(j) = v;
  }
  out.Y = Z * out.G;
  return out;
}

Standardized kent_orientation(const Eigen::MatrixXd& Z) {
  require_sphere_data(Z, 3);
  if (Z.cols() != 3) throw ValidationError("Kent orientation is defined on S_2 (3 columns)");
  const Eigen::VectorXd zbar = Z.colwise().mean().transpose();
  if (zbar.norm() <= kZeroResultant) throw ZeroResultant();

  const Eigen::MatrixXd H = rotation_to_e1(UnitVector(zbar));
  const Eigen::MatrixXd Y1 = Z * H;
  const Eigen::MatrixXd B = Y1.transpose() * Y1 / static_cast<double>(Z.rows());

  // Rotate axes 2-3 to diagonalize the lower 2x2 block of B.
  const double psi = 0.5 * std::atan2(2.0 * B(1, 2), B(1, 1) - B(2, 2));
  Eigen::Matrix3d K = Eigen::Matrix3d::Identity();
  K(1, 1) = std::cos(psi);
  K(1, 2) = -std::sin(psi);
  K(2, 1) = std::sin(psi);
  K(2, 2) = std::cos(psi);

  Eigen::MatrixXd Gamma = H * K;
  Eigen::MatrixXd Y = Z * Gamma;
  const double t22 = Y.col(1).squaredNorm();
  const double t33 = Y.col(2).squaredNorm();
  if (t22 < t33) {
    Gamma.col(1).swap(Gamma.col(2));
    Y.col(1).swap(Y.col(2));
  }
  return {std::move(Gamma), std::move(Y)};
}

SineCentered sine_center(const Eigen::MatrixXd& Theta) {
  if (Theta.rows() < 1 || Theta.cols() < 1) throw ValidationError("need a nonempty angle matrix");
  const auto n = static_cast<double>(Theta.rows());
  SineCentered out{Eigen::VectorXd(Theta.cols()), Eigen::MatrixXd(Theta.rows(), Theta.cols())};
  for (Eigen::Index r = 0; r < Theta.cols(); ++r) {
    const double c = Theta.col(r).array().cos().sum() / n;
    const double s = Theta.col(r).array().sin().sum() / n;
    if (std::hypot(c, s) <= kZeroResultant) throw ZeroResultant(static_cast<int>(r));
    out.theta0[r] = wrap_angle(std::atan2(s, c));
    for (Eigen::Index h = 0; h < Theta.rows(); ++h)
      out.Phi(h, r) = wrap_angle(Theta(h, r) - out.theta0[r]);
  }
  return out;
}

// --- closed-form reduced moments -------------------------------------------------

MomentPair vmf_reduced_moments(const Eigen::MatrixXd& Y) {
  require_sphere_data(Y);
  const auto n = static_cast<double>(Y.rows());
  const double q = static_cast<double>(Y.cols());
  MomentPair mp{Eigen::MatrixXd(1, 1), Eigen::VectorXd(1), Y.rows()};
  mp.W(0, 0) = 1.0 - Y.col(0).squaredNorm() / n;
  mp.d[0] = (q - 1.0) * Y.col(0).sum() / n;
  return mp;
}

MomentPair circle_full_moments(std::span<const double> theta) {
  if (theta.empty()) throw ValidationError("need at least one angle");
  double c = 0, s = 0, c2 = 0, s2 = 0;
  for (double t : theta) {
    c += std::cos(t);
    s += std::sin(t);
    c2 += std::cos(2.0 * t);
    s2 += std::sin(2.0 * t);
  }
  const auto n = static_cast<double>(theta.size());
  c /= n;
  s /= n;
  c2 /= n;
  s2 /= n;
  MomentPair mp{Eigen::MatrixXd(2, 2), Eigen::VectorXd(2), static_cast<long>(theta.size())};
  mp.W << 0.5 * (1.0 - c2), -0.5 * s2, -0.5 * s2, 0.5 * (1.0 + c2);
  mp.d << c, s;
  return mp;
}

MomentPair bingham_reduced_moments(const Eigen::MatrixXd& Y) {
  require_sphere_data(Y);
  const int q = static_cast<int>(Y.cols());
  const auto n = static_cast<double>(Y.rows());
  const int m = q - 1;
  MomentPair mp{Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m), Y.rows()};
  for (Eigen::Index h = 0; h < Y.rows(); ++h) {
    const double yq2 = Y(h, q - 1) * Y(h, q - 1);
    for (int i = 0; i < m; ++i) {
      const double yi2 = Y(h, i) * Y(h, i);
      const double di = yi2 - yq2;
      mp.d[i] += di;
      mp.W(i, i) += yi2 + yq2 - di * di;
      for (int j = i + 1; j < m; ++j) {
        const double dj = Y(h, j) * Y(h, j) - yq2;
        mp.W(i, j) += yq2 - di * dj;
      }
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) mp.W(j, i) = mp.W(i, j);
  mp.W *= 4.0 / n;
  mp.d *= 2.0 * q / n;
  return mp;
}

MomentPair kent_reduced_moments(const Eigen::MatrixXd& Y) {
  require_sphere_data(Y, 3);
  if (Y.cols() != 3) throw ValidationError("Kent moments need 3 columns");
  const auto n = static_cast<double>(Y.rows());
  double s11 = 0, s12 = 0, s22 = 0, s1 = 0, s2 = 0;
  for (Eigen::Index h = 0; h < Y.rows(); ++h) {
    const double y1 = Y(h, 0);
    const double y2sq = Y(h, 1) * Y(h, 1);
    const double y3sq = Y(h, 2) * Y(h, 2);
    const double diff = y2sq - y3sq;
    s11 += y1 * y1;
    s12 += y1 * (y3sq - y2sq);
    s22 += y2sq + y3sq - diff * diff;
    s1 += y1;
    s2 += diff;
  }
  MomentPair mp{Eigen::MatrixXd(2, 2), Eigen::VectorXd(2), Y.rows()};
  const double w12 = 2.0 * s12 / n;
  mp.W << 1.0 - s11 / n, w12, w12, 4.0 * s22 / n;
  mp.d << 2.0 * s1 / n, 6.0 * s2 / n;
  return mp;
}

MomentPair sine_reduced_moments(const Eigen::MatrixXd& Phi) {
  if (Phi.rows() < 1 || Phi.cols() < 1) throw ValidationError("need a nonempty angle matrix");
  const int k = static_cast<int>(Phi.cols());
  const SineStatSpec layout(k);
  const int m = layout.size();
  const auto n = static_cast<double>(Phi.rows());
  MomentPair mp{Eigen::MatrixXd::Zero(m, m), Eigen::VectorXd::Zero(m), Phi.rows()};

  Eigen::VectorXd c(k), s(k);
  for (Eigen::Index h = 0; h < Phi.rows(); ++h) {
    for (int r = 0; r < k; ++r) {
      c[r] = std::cos(Phi(h, r));
      s[r] = std::sin(Phi(h, r));
    }
    for (int r = 0; r < k; ++r) {
      mp.d[r] += c[r];
      mp.W(r, r) += s[r] * s[r];
    }
    for (int r = 0; r < k; ++r) {
      for (int t = r + 1; t < k; ++t) {
        const int a = layout.pair_index(r, t);
        mp.d[a] += 2.0 * s[r] * s[t];
        // Against the cosine block: only coordinates r and t contribute.
        mp.W(r, a) += -s[r] * c[r] * s[t];
        mp.W(t, a) += -s[t] * s[r] * c[t];
        // Against pairs: same pair, or one shared coordinate j with the
        // remaining coordinates x (this pair) and y (the other pair).
        for (int r2 = 0; r2 < k; ++r2) {
          for (int t2 = r2 + 1; t2 < k; ++t2) {
            const int b = layout.pair_index(r2, t2);
            if (b < a) continue;
            double w = 0.0;
            if (r2 == r && t2 == t) {
              w = c[r] * c[r] * s[t] * s[t] + s[r] * s[r] * c[t] * c[t];
            } else {
              int shared = -1, x = -1, y = -1;
              if (r == r2) shared = r, x = t, y = t2;
              else if (r == t2) shared = r, x = t, y = r2;
              else if (t == r2) shared = t, x = r, y = t2;
              else if (t == t2) shared = t, x = r, y = r2;
              if (shared >= 0) w = c[shared] * c[shared] * s[x] * s[y];
            }
            mp.W(a, b) += w;
          }
        }
      }
    }
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) mp.W(b, a) = mp.W(a, b);
  mp.W /= n;
  mp.d /= n;
  return mp;
}

// --- fits -------------------------------------------------------------------------

VmfFit vmf_fit_hybrid(const Eigen::MatrixXd& Z) {
  Standardized st = vmf_orientation(Z);
  MomentPair mp = vmf_reduced_moments(st.Y);
  if (mp.W(0, 0) < kDegenerateW) throw DegenerateConcentration();
  const double kappa = mp.d[0] / mp.W(0, 0);
  UnitVector mu0(st.rotation.col(0));
  return {kappa, std::move(mu0), std::move(st.rotation), std::move(mp)};
}

VmfFit vmf_fit_full(const Eigen::MatrixXd& Z) {
  require_sphere_data(Z);
  const int q = static_cast<int>(Z.cols());
  MomentPair mp = accumulate(Z, vmf_full_statspec(q));
  const NaturalParams pi = solve(mp);
  const double kappa = pi.pi.norm();
  if (!(kappa > 0.0)) throw ZeroResultant();
  UnitVector mu0(pi.pi);
  Eigen::MatrixXd R = rotation_to_e1(mu0);
  return {kappa, std::move(mu0), std::move(R), std::move(mp)};
}

CircleFit vm_fit_hybrid_circle(std::span<const double> theta) {
  if (theta.empty()) throw ValidationError("need at least one angle");
  double c = 0, s = 0;
  for (double t : theta) {
    c += std::cos(t);
    s += std::sin(t);
  }
  const auto n = static_cast<double>(theta.size());
  const double rbar = std::hypot(c, s) / n;
  if (rbar <= kZeroResultant) throw ZeroResultant();
  const double theta0 = std::atan2(s, c);
  double sin2 = 0.0;
  for (double t : theta) {
    const double sd = std::sin(t - theta0);
    sin2 += sd * sd;
  }
  if (sin2 / n < kDegenerateW) throw DegenerateConcentration();
  return {wrap_angle(theta0), n * rbar / sin2};
}

CircleFit vm_fit_full_circle(std::span<const double> theta) {
  if (theta.empty()) throw ValidationError("need at least one angle");
  double c = 0, s = 0, c2 = 0, s2 = 0;
  for (double t : theta) {
    c += std::cos(t);
    s += std::sin(t);
    c2 += std::cos(2.0 * t);
    s2 += std::sin(2.0 * t);
  }
  const auto n = static_cast<double>(theta.size());
  c /= n;
  s /= n;
  c2 /= n;
  s2 /= n;
  const double r2 = std::hypot(c2, s2);
  // Eigenvalues of W_n are (1 +- Rbar_2) / 2.
  if (r2 >= 1.0 - 1e-12) throw SingularW(0.5 * (1.0 - r2), 0.5e-12);
  const double rsq = c * c + s * s;
  const double theta0 = std::atan2(c * s2 + s * (1.0 - c2), c * (1.0 + c2) + s * s2);
  const double radicand = rsq * (1.0 + r2 * r2) + 2.0 * (c * c - s * s) * c2 + 4.0 * c * s * s2;
  const double kappa = 2.0 * std::sqrt(std::max(radicand, 0.0)) / (1.0 - r2 * r2);
  return {wrap_angle(theta0), kappa};
}

BinghamFit bingham_fit_hybrid(const Eigen::MatrixXd& Z) {
  BinghamStandardized st = bingham_standardize(Z);
  MomentPair mp = bingham_reduced_moments(st.Y);
  const NaturalParams pi = solve(mp);
  const auto q = Z.cols();
  Eigen::VectorXd lambda(q);
  lambda.head(q - 1) = pi.pi;
  lambda[q - 1] = -pi.pi.sum();
  return {std::move(lambda), std::move(st.G), std::move(mp)};
}

KentFit kent_fit_hybrid(const Eigen::MatrixXd& Z) {
  Standardized st = kent_orientation(Z);
  MomentPair mp = kent_reduced_moments(st.Y);
  const NaturalParams pi = solve(mp);
  return {pi.pi[0], pi.pi[1], st.rotation, std::move(mp)};
}

SineFit sine_fit_hybrid(const Eigen::MatrixXd& Theta) {
  SineCentered centered = sine_center(Theta);
  MomentPair mp = sine_reduced_moments(centered.Phi);
  const NaturalParams pi = solve(mp);
  const int k = static_cast<int>(Theta.cols());
  const SineStatSpec layout(k);
  SineModelParams params{std::move(centered.theta0), pi.pi.head(k), Eigen::MatrixXd::Zero(k, k)};
  for (int r = 0; r < k; ++r) {
    for (int s = r + 1; s < k; ++s) {
      params.Lambda(r, s) = pi.pi[layout.pair_index(r, s)];
      params.Lambda(s, r) = params.Lambda(r, s);
    }
  }
  return {std::move(params), std::move(mp)};
}

FisherBinghamFit fb_fit_full(const Eigen::MatrixXd& Z) {
  require_sphere_data(Z);
  const int q = static_cast<int>(Z.cols());
  MomentPair mp = accumulate(Z, fb_statspec(q));
  const NaturalParams pi = solve(mp);
  return {FisherBinghamParams::from_natural(q, pi.pi), std::move(mp)};
}

Eigen::MatrixXd circle_to_unit_vectors(std::span<const double> theta) {
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(theta.size()), 2);
  for (std::size_t h = 0; h < theta.size(); ++h) {
    Z(static_cast<Eigen::Index>(h), 0) = std::cos(theta[h]);
    Z(static_cast<Eigen::Index>(h), 1) = std::sin(theta[h]);
  }
  return Z;
}

}  // namespace dirsme
