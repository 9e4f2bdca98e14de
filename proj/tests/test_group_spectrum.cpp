#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "vekua/errors.hpp"
#include "vekua/group_spectrum.hpp"
#include "vekua/su2.hpp"

using namespace vekua;

namespace {

GroupModel circle(double lambda, double p0) { return {{{FactorKind::Circle}}, {lambda}, {p0}}; }
GroupModel su2_model(double lambda, double p0) { return {{{FactorKind::SU2}}, {lambda}, {p0}}; }
GroupModel circle_su2() {
  return {{{FactorKind::Circle}, {FactorKind::SU2}}, {0.7, -1.3}, {0.4, 2.0}};
}

ModeIndex su2_index(int two_l, int two_m, int two_n) { return {{Su2Mode{two_l, two_m, two_n}}}; }

}  // namespace

TEST_CASE("enumerate_modes counts") {
  const auto c = enumerate_modes(circle(1, 0), {1});
  REQUIRE(c.size() == 3);
  CHECK(std::get<CircleMode>(c[0].entries[0]).k == -1);
  CHECK(std::get<CircleMode>(c[2].entries[0]).k == 1);

  // l = 0 gives one coefficient, l = 1/2 gives 2^2.
  CHECK(enumerate_modes(su2_model(1, 0), {1}).size() == 5);

  const auto prod = enumerate_modes(circle_su2(), {0, 1});
  CHECK(prod.size() == 5);
  for (const auto& m : prod) CHECK(std::get<CircleMode>(m.entries[0]).k == 0);

  CHECK(std::is_sorted(prod.begin(), prod.end()));
  CHECK_THROWS_AS(enumerate_modes(circle(1, 0), {-1}), InvalidParameters);
}

TEST_CASE("enumerate_spectrum pins the column index") {
  const auto spec = enumerate_spectrum(su2_model(1, 0), {4});
  CHECK(spec.size() == 1 + 2 + 3 + 4 + 5);
  for (const auto& m : spec) {
    const auto& s = std::get<Su2Mode>(m.entries[0]);
    CHECK(s.two_m == s.two_n);
  }
}

TEST_CASE("mode_scalars examples") {
  const auto s1 = mode_scalars(circle(2, 3), ModeIndex{{CircleMode{1}}});
  CHECK(s1.a == 2.0);
  CHECK(s1.b == 3.0);
  CHECK(s1.weight == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const auto s2 = mode_scalars(su2_model(1, 0), su2_index(1, -1, 1));
  CHECK(s2.mu[0] == -0.5);
  CHECK(s2.a == -0.5);
  CHECK(s2.b == 0.0);
  CHECK(s2.weight == doctest::Approx(std::sqrt(1.75)).epsilon(1e-15));

  const auto s3 = mode_scalars(circle_su2(), ModeIndex{{CircleMode{0}, Su2Mode{2, 0, 2}}});
  CHECK(s3.a == 0.0);
  CHECK(s3.b == 0.0);

  CHECK_THROWS_AS(mode_scalars(su2_model(1, 0), su2_index(1, 0, 1)), InvalidParameters);
  CHECK_THROWS_AS(mode_scalars(su2_model(1, 0), su2_index(2, 4, 0)), InvalidParameters);
}

TEST_CASE("conjugate_mode examples") {
  const auto c = conjugate_mode(circle(1, 0), ModeIndex{{CircleMode{3}}});
  CHECK(std::get<CircleMode>(c.mode.entries[0]).k == -3);
  CHECK(c.phase == std::complex<double>(1.0, 0.0));

  const auto triv = conjugate_mode(su2_model(1, 0), su2_index(0, 0, 0));
  CHECK(triv.mode == su2_index(0, 0, 0));
  CHECK(triv.phase == std::complex<double>(1.0, 0.0));

  // Phase for (2l, 2m, 2n) = (1, 1, -1) read off the explicit spin-1/2 matrices:
  // conj(t_{nm}(U)) / t_{-n,-m}(U) at a generic U.
  const Eigen::MatrixXcd t = su2::irrep(1, Eigen::Vector3d(0.3, -1.1, 0.7), 1.234);
  const int n = su2::row_of(1, -1), m = su2::row_of(1, 1);
  const std::complex<double> brute =
      std::conj(t(n, m)) / t(su2::row_of(1, 1), su2::row_of(1, -1));
  const auto half = conjugate_mode(su2_model(1, 0), su2_index(1, 1, -1));
  CHECK(half.mode == su2_index(1, -1, 1));
  CHECK(std::abs(half.phase - brute) < 1e-12);
  CHECK(half.phase == std::complex<double>(-1.0, 0.0));
}

TEST_CASE("su2 conjugation convention matches explicit matrices") {
  for (int two_l = 1; two_l <= 6; ++two_l)
    CHECK(su2::conjugation_convention_residual(two_l, 25, 17u + two_l) < 1e-12);
}

TEST_CASE("su2 irreps are unitary representations with diagonal J_z") {
  const Eigen::Vector3d axis(0.2, 0.5, -0.4);
  for (int two_l = 0; two_l <= 4; ++two_l) {
    const Eigen::MatrixXcd u = su2::irrep(two_l, axis, 0.77);
    CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(two_l + 1, two_l + 1)).norm() < 1e-12);
    // exp(-i t J_z) is diagonal with entries e^{-i m t}.
    const Eigen::MatrixXcd z = su2::irrep(two_l, Eigen::Vector3d::UnitZ(), 0.5);
    for (int i = 0; i <= two_l; ++i)
      CHECK(std::abs(z(i, i) - std::polar(1.0, -0.5 * (-0.5 * two_l + i))) < 1e-12);
    // Casimir J^2 = l(l+1).
    const Eigen::MatrixXcd jx = su2::jx(two_l), jy = su2::jy(two_l), jz = su2::jz(two_l);
    const Eigen::MatrixXcd casimir = jx * jx + jy * jy + jz * jz;
    const double l = 0.5 * two_l;
    CHECK((casimir - l * (l + 1) * Eigen::MatrixXcd::Identity(two_l + 1, two_l + 1)).norm() < 1e-12);
  }
}

TEST_CASE("spectral invariants over a product model") {
  const GroupModel model = circle_su2();
  const Truncation trunc{3, 4};
  const auto modes = enumerate_modes(model, trunc);
  const std::set<ModeIndex> all(modes.begin(), modes.end());
  const double lam = std::abs(model.lambda[0]) + std::abs(model.lambda[1]);
  const double p0 = std::abs(model.p0[0]) + std::abs(model.p0[1]);
  for (const auto& mode : modes) {
    const auto s = mode_scalars(model, mode);
    CHECK(s.weight >= 1.0);
    for (Eigen::Index j = 0; j < s.mu.size(); ++j) CHECK(std::abs(s.mu[j]) <= s.weight);
    CHECK(std::abs(s.a) <= lam * s.weight);
    CHECK(std::abs(s.b) <= p0 * s.weight);

    const auto c = conjugate_mode(model, mode);
    CHECK(all.count(c.mode) == 1);
    const auto cc = conjugate_mode(model, c.mode);
    CHECK(cc.mode == mode);
    CHECK(std::abs(c.phase * cc.phase - 1.0) == 0.0);

    const auto sc = mode_scalars(model, c.mode);
    CHECK(sc.a == -s.a);
    CHECK(sc.b == -s.b);
    CHECK(sc.weight == s.weight);
  }
}
