#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dirsme/errors.hpp"
#include "dirsme/models.hpp"
#include "dirsme/statspecs.hpp"
#include "support.hpp"

using namespace dirsme;
using std::numbers::pi;
using testing_support::max_abs;

namespace {

Eigen::MatrixXd random_orthogonal(int q, std::uint64_t seed) {
  const Eigen::MatrixXd A = testing_support::random_sphere(q, q, seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  return qr.householderQ();
}

std::vector<double> random_circle(int n, std::uint64_t seed, double spread = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.3, spread);
  std::vector<double> t(n);
  for (auto& x : t) x = normal(gen);
  return t;
}

bool orthogonal(const Eigen::MatrixXd& M, double tol) {
  return max_abs(M.transpose() * M - Eigen::MatrixXd::Identity(M.cols(), M.cols())) < tol;
}

void check_same(const MomentPair& a, const MomentPair& b, double tol = 1e-12) {
  REQUIRE(a.W.rows() == b.W.rows());
  CHECK(max_abs(a.W - b.W) <= tol);
  CHECK(max_abs(a.d - b.d) <= tol);
}

double angle_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

}  // namespace

TEST_CASE("rotation_to_e1") {
  for (int q : {2, 3, 5}) {
    const Eigen::MatrixXd Z = testing_support::random_sphere(30, q, 100 + q);
    for (int h = 0; h < Z.rows(); ++h) {
      const UnitVector mu(Z.row(h).transpose());
      const Eigen::MatrixXd R = rotation_to_e1(mu);
      CHECK(orthogonal(R, 1e-13));
      CHECK(max_abs(R.transpose() * mu.coords() - Eigen::VectorXd::Unit(q, 0)) < 1e-13);
    }
    CHECK(max_abs(rotation_to_e1(UnitVector::axis(q, 0)) - Eigen::MatrixXd::Identity(q, q)) == 0.0);
    // Continuous at e_1.
    Eigen::VectorXd near = Eigen::VectorXd::Unit(q, 0);
    near[q - 1] = 1e-7;
    CHECK(max_abs(rotation_to_e1(UnitVector(near)) - Eigen::MatrixXd::Identity(q, q)) < 1e-6);
    CHECK(max_abs(rotation_to_e1(UnitVector(-Eigen::VectorXd::Unit(q, 0))).transpose() *
                      -Eigen::VectorXd::Unit(q, 0) -
                  Eigen::VectorXd::Unit(q, 0)) < 1e-15);
  }
}

TEST_CASE("vmf_orientation") {
  SUBCASE("all rows equal e_2") {
    const Eigen::MatrixXd Z = Eigen::RowVector3d(0, 1, 0).replicate(5, 1);
    const Standardized st = vmf_orientation(Z);
    CHECK(max_abs(st.rotation.transpose() * Eigen::Vector3d(0, 1, 0) - Eigen::Vector3d(1, 0, 0)) < 1e-15);
    CHECK(max_abs(st.Y - Eigen::RowVector3d(1, 0, 0).replicate(5, 1)) < 1e-15);
  }
  SUBCASE("circle data +-theta") {
    const double t = 0.9;
    const std::vector<double> theta{t, -t};
    const Standardized st = vmf_orientation(circle_to_unit_vectors(theta));
    const Eigen::RowVectorXd ybar = st.Y.colwise().mean();
    CHECK(ybar[0] == doctest::Approx(std::cos(t)));
    CHECK(std::abs(ybar[1]) < 1e-15);
  }
  SUBCASE("random data") {
    for (int q : {2, 3, 6}) {
      const Eigen::MatrixXd Z = testing_support::random_cap(80, q, 200 + q);
      const Standardized st = vmf_orientation(Z);
      const Eigen::RowVectorXd ybar = st.Y.colwise().mean();
      CHECK(ybar[0] == doctest::Approx(Z.colwise().mean().norm()).epsilon(1e-12));
      CHECK(ybar.tail(q - 1).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(orthogonal(st.rotation, 1e-12));
    }
  }
  SUBCASE("zero resultant") {
    Eigen::MatrixXd Z(2, 3);
    Z << 0, 0, 1, 0, 0, -1;
    CHECK_THROWS_AS(vmf_orientation(Z), ZeroResultant);
  }
}

TEST_CASE("hybrid vMF fit") {
  const std::vector<double> sixty{pi / 3, -pi / 3};
  CHECK(vmf_fit_hybrid(circle_to_unit_vectors(sixty)).kappa == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  const CircleFit c = vm_fit_hybrid_circle(sixty);
  CHECK(c.kappa == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(angle_diff(c.theta0, 0.0) < 1e-15);

  // The d/W form and the polar form n R / sum sin^2 are the same number.
  for (int i = 0; i < 100; ++i) {
    const auto theta = random_circle(5 + i % 40, 300 + i);
    const VmfFit a = vmf_fit_hybrid(circle_to_unit_vectors(theta));
    const CircleFit b = vm_fit_hybrid_circle(theta);
    CHECK(a.kappa == doctest::Approx(b.kappa).epsilon(1e-12));
    CHECK(angle_diff(std::atan2(a.mu0[1], a.mu0[0]), b.theta0) < 1e-12);
  }

  const Eigen::MatrixXd same = Eigen::RowVector3d(0.6, 0.0, 0.8).replicate(4, 1);
  CHECK_THROWS_AS(vmf_fit_hybrid(same), DegenerateConcentration);
}

TEST_CASE("hybrid vMF fit is rotation equivariant") {
  for (int q : {3, 4}) {
    const Eigen::MatrixXd Z = testing_support::random_cap(60, q, 400 + q);
    const Eigen::MatrixXd Q = random_orthogonal(q, 500 + q);
    const VmfFit a = vmf_fit_hybrid(Z);
    const VmfFit b = vmf_fit_hybrid(Z * Q);
    CHECK(b.kappa == doctest::Approx(a.kappa).epsilon(1e-10));
    CHECK(max_abs(b.mu0.coords() - Q.transpose() * a.mu0.coords()) < 1e-10);
  }
}

TEST_CASE("full circle fit") {
  const std::vector<double> sixty{pi / 3, -pi / 3};
  const CircleFit f = vm_fit_full_circle(sixty);
  CHECK(f.kappa == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(angle_diff(f.theta0, 0.0) < 1e-14);

  // Symmetric about 0: S = S2 = 0, so full and hybrid coincide.
  for (int i = 0; i < 20; ++i) {
    auto half = random_circle(6, 600 + i);
    std::vector<double> sym;
    for (double t : half) {
      sym.push_back(t);
      sym.push_back(-t);
    }
    const CircleFit full = vm_fit_full_circle(sym);
    const CircleFit hyb = vm_fit_hybrid_circle(sym);
    if (std::cos(full.theta0) < 0) continue;  // resultant pointing at pi; hybrid flips sign
    CHECK(full.kappa == doctest::Approx(hyb.kappa).epsilon(1e-10));
    CHECK(angle_diff(full.theta0, hyb.theta0) < 1e-10);
  }

  // Closed form against the generic engine.
  for (int i = 0; i < 100; ++i) {
    const auto theta = random_circle(4 + i % 30, 700 + i);
    const CircleFit f2 = vm_fit_full_circle(theta);
    const Eigen::VectorXd p = solve(accumulate(circle_to_unit_vectors(theta), vmf_full_statspec(2))).pi;
    CHECK(f2.kappa == doctest::Approx(p.norm()).epsilon(1e-10));
    CHECK(angle_diff(f2.theta0, std::atan2(p[1], p[0])) < 1e-10);
  }

  const std::vector<double> axial{0.4, 0.4 + pi, 0.4};
  CHECK_THROWS_AS(vm_fit_full_circle(axial), SingularW);
}

TEST_CASE("population identity on the circle") {
  // Quadrature moments of vM(0, kappa): E sin^2 and E cos give d / W = kappa.
  for (double kappa : {0.3, 1.0, 4.0, 25.0}) {
    const int nodes = 8192;
    std::vector<double> theta(nodes), w(nodes);
    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
      theta[i] = 2 * pi * i / nodes;
      w[i] = std::exp(kappa * (std::cos(theta[i]) - 1));
      total += w[i];
    }
    double ec = 0, es2 = 0;
    for (int i = 0; i < nodes; ++i) {
      ec += w[i] * std::cos(theta[i]) / total;
      es2 += w[i] * std::pow(std::sin(theta[i]), 2) / total;
    }
    CHECK(ec / es2 == doctest::Approx(kappa).epsilon(1e-8));
  }
}

TEST_CASE("engine equivalence of the closed forms") {
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t seed = 1000 + i;
    SUBCASE("reduced vMF") {
      for (int q : {2, 3, 5}) {
        const Eigen::MatrixXd Y = vmf_orientation(testing_support::random_cap(40, q, seed)).Y;
        check_same(vmf_reduced_moments(Y), accumulate(Y, vmf_reduced_statspec(q)));
      }
    }
    SUBCASE("reduced Bingham") {
      for (int q : {3, 4}) {
        const Eigen::MatrixXd Y = bingham_standardize(testing_support::random_sphere(50, q, seed)).Y;
        check_same(bingham_reduced_moments(Y), accumulate(Y, bingham_reduced_statspec(q)));
      }
    }
    SUBCASE("reduced Kent") {
      const Eigen::MatrixXd Y = kent_orientation(testing_support::random_cap(50, 3, seed)).Y;
      check_same(kent_reduced_moments(Y), accumulate(Y, kent_reduced_statspec()));
    }
    SUBCASE("full circle") {
      const auto theta = random_circle(30, seed, 1.5);
      check_same(circle_full_moments(theta),
                 accumulate(circle_to_unit_vectors(theta), vmf_full_statspec(2)));
    }
    SUBCASE("sine") {
      for (int k : {1, 2, 4}) {
        const Eigen::MatrixXd Phi = sine_center(testing_support::random_angles(40, k, seed)).Phi;
        check_same(sine_reduced_moments(Phi), accumulate(Phi, SineStatSpec(k)));
      }
    }
  }
}

TEST_CASE("bingham_standardize") {
  SUBCASE("axial data on e_3") {
    Eigen::MatrixXd Z(4, 3);
    Z << 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1;
    const BinghamStandardized st = bingham_standardize(Z);
    CHECK(max_abs(st.G.col(0) - Eigen::Vector3d(0, 0, 1)) < 1e-14);
    CHECK(max_abs(st.eigenvalues - Eigen::Vector3d(1, 0, 0)) < 1e-14);
  }
  SUBCASE("random data") {
    for (int q : {3, 5}) {
      const Eigen::MatrixXd Z = testing_support::random_sphere(60, q, 800 + q);
      const BinghamStandardized st = bingham_standardize(Z);
      Eigen::MatrixXd TY = st.Y.transpose() * st.Y / 60.0;
      CHECK(max_abs(TY - Eigen::MatrixXd(TY.diagonal().asDiagonal())) < 1e-10);
      CHECK(st.eigenvalues.sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = 1; j < q; ++j) CHECK(st.eigenvalues[j - 1] >= st.eigenvalues[j]);
      for (int j = 0; j < q; ++j) {
        Eigen::Index big = 0;
        st.G.col(j).cwiseAbs().maxCoeff(&big);
        CHECK(st.G(big, j) > 0.0);
      }
    }
  }
  SUBCASE("antipodal invariance of the fit") {
    const Eigen::MatrixXd Z = testing_support::random_sphere(60, 3, 900);
    Eigen::MatrixXd flipped = Z;
    for (int h = 0; h < Z.rows(); h += 2) flipped.row(h) *= -1.0;
    CHECK(max_abs(bingham_fit_hybrid(Z).lambda - bingham_fit_hybrid(flipped).lambda) < 1e-10);
    CHECK(bingham_fit_hybrid(Z).lambda.sum() == doctest::Approx(0.0));
  }
}

TEST_CASE("kent_orientation") {
  for (int i = 0; i < 20; ++i) {
    const Eigen::MatrixXd Z = testing_support::random_cap(70, 3, 1100 + i, 0.8);
    const Standardized st = kent_orientation(Z);
    const Eigen::RowVectorXd ybar = st.Y.colwise().mean();
    const Eigen::MatrixXd T = st.Y.transpose() * st.Y / 70.0;
    CHECK(orthogonal(st.rotation, 1e-12));
    CHECK(ybar[0] == doctest::Approx(Z.colwise().mean().norm()).epsilon(1e-12));
    CHECK(std::abs(ybar[1]) < 1e-10);
    CHECK(std::abs(ybar[2]) < 1e-10);
    CHECK(std::abs(T(1, 2)) < 1e-10);
    CHECK(T(1, 1) - T(2, 2) >= -1e-10);

    // A second pass finds nothing left to rotate.
    const Standardized again = kent_orientation(st.Y);
    CHECK(max_abs(again.rotation.cwiseAbs() - Eigen::Matrix3d::Identity()) < 1e-8);
  }
}

TEST_CASE("sine_center") {
  Eigen::MatrixXd T(3, 2);
  T << 1.2, pi / 3, 1.2, -pi / 3, 1.2, 0.0;
  const SineCentered c = sine_center(T);
  CHECK(c.theta0[0] == doctest::Approx(1.2));
  CHECK(max_abs(c.Phi.col(0)) < 1e-15);
  CHECK(angle_diff(c.theta0[1], 0.0) < 1e-15);

  const SineCentered r = sine_center(testing_support::random_angles(50, 3, 1200, 2.0));
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(r.Phi.col(j).array().sin().sum()) < 1e-10);
    CHECK(r.theta0[j] >= 0.0);
    CHECK(r.theta0[j] < 2 * pi);
    CHECK(r.Phi.col(j).minCoeff() >= 0.0);
    CHECK(r.Phi.col(j).maxCoeff() < 2 * pi);
  }

  Eigen::MatrixXd bad(2, 3);
  bad << 0.1, 0.0, 0.3, 0.2, pi, 0.4;
  try {
    sine_center(bad);
    FAIL("expected ZeroResultant");
  } catch (const ZeroResultant& e) {
    CHECK(e.column() == 1);
  }
}

TEST_CASE("sine model with one angle is the circle hybrid fit") {
  for (int i = 0; i < 10; ++i) {
    const auto theta = random_circle(25, 1300 + i);
    const Eigen::MatrixXd T = Eigen::Map<const Eigen::VectorXd>(theta.data(), 25);
    const SineFit s = sine_fit_hybrid(T);
    const CircleFit c = vm_fit_hybrid_circle(theta);
    CHECK(s.params.kappa[0] == doctest::Approx(c.kappa).epsilon(1e-12));
    CHECK(angle_diff(s.params.theta0[0], c.theta0) < 1e-12);
  }
}

TEST_CASE("Fisher-Bingham parameters") {
  FisherBinghamParams p{Eigen::Vector3d(1, -2, 0.5), Eigen::Matrix3d::Zero()};
  p.A << 1, 0.2, -0.3, 0.2, 0.5, 0.7, -0.3, 0.7, -1.5;
  p.validate();
  const Eigen::VectorXd nat = p.natural();
  CHECK(nat.size() == 8);
  const FisherBinghamParams back = FisherBinghamParams::from_natural(3, nat);
  CHECK(max_abs(back.A - p.A) < 1e-15);
  CHECK(max_abs(back.b - p.b) < 1e-15);

  // Natural parameters reproduce the log density through fb_statspec.
  const Eigen::Vector3d z = Eigen::Vector3d(0.2, -0.7, 0.4).normalized();
  CHECK(nat.dot(fb_statspec(3).values(z)) ==
        doctest::Approx(p.b.dot(z) + z.dot(p.A * z) - 0.0).epsilon(1e-12));

  FisherBinghamParams bad = p;
  bad.A(0, 0) += 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.A(0, 1) += 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((BinghamParams{Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 1, 1)}.validate()), ValidationError);
  CHECK_THROWS_AS((BinghamParams{2 * Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 0, -1)}.validate()), ValidationError);
  KentParams k;
  k.kappa = -1;
  CHECK_THROWS_AS(k.validate(), ValidationError);
  SineModelParams s{Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 2), Eigen::Matrix2d::Identity()};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.Lambda << 0, 1, 2, 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.Lambda << 0, 1, 1, 0;
  s.validate();
  CHECK(s.natural().size() == 3);
  CHECK(s.natural()[2] == 1.0);
}
