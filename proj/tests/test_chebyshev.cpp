#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pdef/chebyshev.hpp"

using namespace pdef;

namespace {

struct Poly {
  std::vector<double> c;  // monomial coefficients
  double operator()(double x) const {
    double s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
    return s;
  }
  double deriv(double x) const {
    double s = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) s = s * x + static_cast<double>(k) * c[k];
    return s;
  }
};

Poly random_poly(std::size_t degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p;
  p.c.resize(degree + 1);
  for (double& x : p.c) x = u(rng);
  return p;
}

}  // namespace

TEST_CASE("gauss_lobatto_nodes") {
  CHECK(gauss_lobatto_nodes(1) == std::vector<double>{-1.0, 1.0});
  const auto n2 = gauss_lobatto_nodes(2);
  CHECK(n2[0] == -1.0);
  CHECK(n2[1] == doctest::Approx(0.0).epsilon(1e-16));
  CHECK(n2[2] == 1.0);
  CHECK(gauss_lobatto_nodes(4)[1] == doctest::Approx(-0.7071068).epsilon(1e-7));
  CHECK_THROWS_AS(gauss_lobatto_nodes(0), std::invalid_argument);

  const auto n9 = gauss_lobatto_nodes(9);
  for (std::size_t j = 0; j < n9.size(); ++j) {
    CHECK(std::abs(n9[j] + std::cos(std::numbers::pi * j / 9.0)) <= 1e-15);
    if (j > 0) CHECK(n9[j] > n9[j - 1]);
  }
}

TEST_CASE("diff_matrix on constants, x and T_8") {
  for (std::size_t n : {1u, 2u, 5u, 16u}) {
    const auto d = diff_matrix(n);
    const auto x = gauss_lobatto_nodes(n);
    const auto ones = matvec(d, std::vector<double>(n + 1, 1.0));
    const auto slope = matvec(d, x);
    for (std::size_t i = 0; i <= n; ++i) {
      CHECK(std::abs(ones[i]) <= 1e-10);
      CHECK(std::abs(slope[i] - 1.0) <= 1e-10);
    }
  }
  const std::size_t n = 16;
  const auto x = gauss_lobatto_nodes(n);
  std::vector<double> t8(n + 1);
  for (std::size_t j = 0; j <= n; ++j) t8[j] = oracle::cheb_t(8, x[j]);
  const auto dt8 = matvec(diff_matrix(n), t8);
  for (std::size_t j = 0; j <= n; ++j) CHECK(std::abs(dt8[j] - oracle::cheb_dt(8, x[j])) <= 1e-8);

  CHECK_THROWS_AS(diff_matrix(0), std::invalid_argument);
}

TEST_CASE("diff_matrix corner entries have magnitude (2N^2+1)/6") {
  for (std::size_t n : {2u, 7u, 32u}) {
    const auto d = diff_matrix(n);
    const double corner = (2.0 * n * n + 1.0) / 6.0;
    CHECK(std::abs(d(0, 0) + corner) <= 1e-9 * corner);
    CHECK(std::abs(d(n, n) - corner) <= 1e-9 * corner);
  }
}

TEST_CASE("differentiation is exact on random polynomials of degree <= N") {
  std::mt19937_64 rng(17);
  for (std::size_t n : {4u, 8u, 16u}) {
    const auto d = diff_matrix(n);
    const auto x = gauss_lobatto_nodes(n);
    for (int trial = 0; trial < 25; ++trial) {
      const auto p = random_poly(n, rng);
      std::vector<double> v(n + 1);
      for (std::size_t j = 0; j <= n; ++j) v[j] = p(x[j]);
      const auto dv = matvec(d, v);
      double err = 0.0, scale = 0.0;
      for (std::size_t j = 0; j <= n; ++j) {
        err = std::max(err, std::abs(dv[j] - p.deriv(x[j])));
        scale = std::max(scale, std::abs(p.deriv(x[j])));
      }
      CHECK(err <= 1e-8 * (1.0 + scale));
    }
    double worst_row = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= n; ++j) s += d(i, j);
      worst_row = std::max(worst_row, std::abs(s));
    }
    CHECK(worst_row <= 1e-10);
  }
}

TEST_CASE("eval_chebyshev") {
  CHECK(eval_chebyshev(0, 0.42) == 1.0);
  CHECK(eval_chebyshev(1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(eval_chebyshev(3, 0.5) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(eval_chebyshev(2, 1.0000001), std::domain_error);
  CHECK_THROWS_AS(eval_chebyshev(2, NAN), std::domain_error);
}

TEST_CASE("discrete orthogonality under the Chebyshev weight") {
  // Gauss-Chebyshev quadrature with M nodes is exact for degree < 2M.
  const int m = 20;
  for (std::size_t i = 0; i <= 8; ++i) {
    for (std::size_t j = 0; j <= 8; ++j) {
      double s = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double xk = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * m));
        s += eval_chebyshev(i, xk) * eval_chebyshev(j, xk);
      }
      s *= std::numbers::pi / m;
      const double want = (i != j) ? 0.0 : (i == 0 ? std::numbers::pi : std::numbers::pi / 2.0);
      CHECK(std::abs(s - want) <= 1e-10);
    }
  }
}

TEST_CASE("cc_weights") {
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto w = cc_weights(n);
    double s = 0.0;
    for (double x : w) {
      s += x;
      CHECK(x > 0.0);
    }
    CHECK(std::abs(s - 2.0) <= 1e-12);
  }
  const auto w2 = cc_weights(2);
  CHECK(w2[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(w2[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(w2[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const auto x8 = gauss_lobatto_nodes(8);
  const auto w8 = cc_weights(8);
  double quartic = 0.0;
  for (std::size_t j = 0; j <= 8; ++j) quartic += w8[j] * std::pow(x8[j], 4);
  CHECK(std::abs(quartic - 0.4) <= 1e-12);

  CHECK_THROWS_AS(cc_weights(0), std::invalid_argument);
}

TEST_CASE("cc_weights integrate monomials of degree <= N exactly") {
  for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
    const auto x = gauss_lobatto_nodes(n);
    const auto w = cc_weights(n);
    for (std::size_t m = 0; m <= n; ++m) {
      double s = 0.0;
      for (std::size_t j = 0; j <= n; ++j) s += w[j] * std::pow(x[j], static_cast<double>(m));
      const double exact = (m % 2 == 1) ? 0.0 : 2.0 / (static_cast<double>(m) + 1.0);
      CHECK(std::abs(s - exact) <= 1e-10);
    }
  }
}

TEST_CASE("barycentric_interp") {
  const SpectralGrid grid(8, {-1.0, 1.0});
  std::vector<double> cube(grid.size()), five(grid.size(), 5.0);
  for (std::size_t j = 0; j < grid.size(); ++j) cube[j] = std::pow(grid.nodes()[j], 3);

  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(barycentric_interp(grid, cube, grid.nodes()[j]) == cube[j]);
  CHECK(barycentric_interp(grid, five, 0.123) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(std::abs(barycentric_interp(grid, cube, 0.37) - std::pow(0.37, 3)) <= 1e-12);

  CHECK_THROWS_AS(barycentric_interp(grid, cube, 1.01), std::domain_error);
  CHECK_THROWS_AS(barycentric_interp(grid, std::vector<double>(3, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("barycentric_interp reproduces polynomials on a mapped grid") {
  std::mt19937_64 rng(3);
  const Interval dom{-3.0, 7.0};
  for (std::size_t n : {5u, 12u, 24u}) {
    const SpectralGrid grid(n, dom);
    std::uniform_real_distribution<double> ux(dom.lo, dom.hi);
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = random_poly(n, rng);
      // Evaluate in reference coordinates to keep the values O(1).
      std::vector<double> v(grid.size());
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = p(grid.reference_nodes()[j]);
      for (int i = 0; i < 100; ++i) {
        const double x = ux(rng);
        CHECK(std::abs(barycentric_interp(grid, v, x) - p(affine_map(dom, x))) <= 1e-10);
      }
    }
  }
}

TEST_CASE("affine map") {
  CHECK(affine_map({0.0, 10.0}, 5.0) == 0.0);
  CHECK(affine_map({0.0, 10.0}, 10.0) == 1.0);
  CHECK(affine_map({-3.0, 7.0}, -3.0) == -1.0);
  CHECK(affine_scale({0.0, 10.0}) == 0.2);
  CHECK_THROWS_AS(affine_map({1.0, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(affine_unmap({2.0, 1.0}, 0.0), std::invalid_argument);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const Interval d{a, b};
    const double x = a + (b - a) * (u(rng) + 50.0) / 100.0;
    CHECK(std::abs(affine_unmap(d, affine_map(d, x)) - x) <= 1e-14 * std::max(1.0, std::abs(x)) * 50.0);
  }
}

TEST_CASE("SpectralGrid invariants") {
  const SpectralGrid g(10, {2.0, 6.0});
  CHECK(g.size() == 11);
  CHECK(g.nodes().front() == 2.0);
  CHECK(g.nodes().back() == 6.0);
  double s = 0.0;
  for (double w : g.quad_weights()) s += w;
  CHECK(std::abs(s - 2.0) <= 1e-12);
  std::vector<double> ones(11, 1.0);
  CHECK(std::abs(g.integrate(ones) - 4.0) <= 1e-12);
  CHECK(g.nearest_node(2.0) == 0);
  CHECK(g.nearest_node(100.0) == 10);
  CHECK_THROWS_AS(SpectralGrid(0, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpectralGrid(4, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("coefficients, antiderivative and Clenshaw agree with closed forms") {
  const std::size_t n = 12;
  const auto x = gauss_lobatto_nodes(n);
  std::vector<double> v(n + 1);
  for (std::size_t j = 0; j <= n; ++j) v[j] = 3.0 * x[j] * x[j] - x[j] + 0.5;  // 2 + 1.5 T2 - T1... in T basis
  const auto a = chebyshev_coefficients(v);
  CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(a[1] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(a[2] == doctest::Approx(1.5).epsilon(1e-13));
  for (std::size_t k = 3; k <= n; ++k) CHECK(std::abs(a[k]) <= 1e-13);

  for (double xi : {-1.0, -0.3, 0.0, 0.8, 1.0}) {
    CHECK(clenshaw(a, xi) == doctest::Approx(3.0 * xi * xi - xi + 0.5).epsilon(1e-13));
    const double anti = xi * xi * xi - 0.5 * xi * xi + 0.5 * xi - (-1.0 - 0.5 - 0.5);
    CHECK(clenshaw(integrate_coefficients(a), xi) == doctest::Approx(anti).epsilon(1e-13));
  }
}
