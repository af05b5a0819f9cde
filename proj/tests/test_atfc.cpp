#include <doctest.h>

#include "hdelm/atfc.hpp"
#include "hdelm/errors.hpp"
#include "support.hpp"

using namespace hdelm;
using namespace hdelm::testing;

namespace {

// f(x) = sin(x0) cos(2 x1) + x0^2 x1 (+ t e^{x0} for a time coordinate) with analytic pure partials.
double smooth(const std::vector<double>& x) {
  double v = std::sin(x[0]) * std::cos(2 * x[1]) + x[0] * x[0] * x[1];
  if (x.size() > 2) v += x[2] * std::exp(x[0]);
  return v;
}

ScalarField smooth_field() {
  auto value = [](std::span<const double> x) { return smooth(std::vector<double>(x.begin(), x.end())); };
  auto partial = [](std::span<const double> x, int k, int order) -> double {
    const bool dyn = x.size() > 2;
    const double t = dyn ? x[2] : 0.0;
    if (order == 0) return smooth(std::vector<double>(x.begin(), x.end()));
    if (k == 0) {
      const double c = std::cos(2 * x[1]);
      switch (order) {
        case 1: return std::cos(x[0]) * c + 2 * x[0] * x[1] + t * std::exp(x[0]);
        case 2: return -std::sin(x[0]) * c + 2 * x[1] + t * std::exp(x[0]);
        default: return -std::cos(x[0]) * c + t * std::exp(x[0]);
      }
    }
    if (k == 1) {
      const double s = std::sin(x[0]);
      switch (order) {
        case 1: return -2 * s * std::sin(2 * x[1]) + x[0] * x[0];
        case 2: return -4 * s * std::cos(2 * x[1]);
        default: return 8 * s * std::sin(2 * x[1]);
      }
    }
    return order == 1 ? std::exp(x[0]) : 0.0;
  };
  return ScalarField(value, partial);
}

PdeProblem problem_with_boundary(const BoxDomain& box, ScalarField h) {
  PdeProblem p = make_problem("poisson", box.d());
  p.name = "custom";
  p.domain = box;
  p.exact.reset();
  p.forcing = [](std::span<const double>) { return 0.0; };
  p.boundary = std::move(h);
  return p;
}

}  // namespace

TEST_CASE("stencil weights and projected points") {
  const BoxDomain box({-1.0, 0.0}, {1.0, 3.0}, 2.0);
  const std::vector<double> x{0.2, 1.0, 0.5};
  const ProjectedStencil st = make_stencil(box, x);
  REQUIRE(st.entries.size() == 5);
  for (int i = 0; i < 2; ++i) {
    const auto& lo = st.entries[2 * i];
    const auto& hi = st.entries[2 * i + 1];
    CHECK(lo.weight + hi.weight == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lo.point[i] == box.lo(i));
    CHECK(hi.point[i] == box.hi(i));
  }
  CHECK(st.entries[4].coordinate == 2);
  CHECK(st.entries[4].point[2] == 0.0);
  CHECK(st.entries[4].weight == doctest::Approx(0.75));
}

TEST_CASE("A of a constant is d times the constant") {
  const ScalarField c([](std::span<const double>) { return 2.5; }, [](std::span<const double>, int, int order) {
    return order == 0 ? 2.5 : 0.0;
  });
  for (int d = 1; d <= 6; ++d) {
    const BoxDomain box = BoxDomain::cube(d, -1, 2);
    const PointBlock pts = random_cube_points(10, d, -1, 2, d);
    for (Index r = 0; r < pts.rows(); ++r)
      CHECK(apply_A(c, box, row_vec(pts, r), 0).value == doctest::Approx(2.5 * d).epsilon(1e-14));
  }
}

TEST_CASE("A in one dimension is the linear interpolant") {
  const BoxDomain box = BoxDomain::cube(1, -0.5, 2.0);
  const ScalarField f([](std::span<const double> x) { return std::exp(x[0]); });
  const double fa = std::exp(-0.5), fb = std::exp(2.0);
  for (double x : {-0.5, 0.1, 1.3, 2.0}) {
    const std::vector<double> p{x};
    const double expect = ((2.0 - x) * fa + (x + 0.5) * fb) / 2.5;
    CHECK(apply_A(f, box, p, 0).value == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(apply_A(f, box, std::vector<double>{-0.5}, 0).value == fa);
}

TEST_CASE("derivatives of A f match finite differences of the direct blend") {
  const ScalarField f = smooth_field();
  auto fv = [](const std::vector<double>& y) { return smooth(y); };

  const BoxDomain box = BoxDomain::cube(2, -1, 1.5);
  const PointBlock pts = random_cube_points(30, 2, -0.9, 1.4, 8);
  for (Index r = 0; r < pts.rows(); ++r) {
    const auto x = row_vec(pts, r);
    const PointProjection a = apply_A(f, box, x, 3);
    auto blend = [&](const std::vector<double>& y) { return blend_faces(fv, box, y); };
    double fd_lap = 0;
    for (int k = 0; k < 2; ++k) {
      const double h = 1e-4;
      auto yp = x, ym = x;
      yp[k] += h;
      ym[k] -= h;
      fd_lap += (blend(yp) - 2 * blend(x) + blend(ym)) / (h * h);
      CHECK(a.grad[k] == doctest::Approx((blend(yp) - blend(ym)) / (2 * h)).epsilon(1e-7));
    }
    CHECK(std::abs(a.laplacian(2) - fd_lap) <= 1e-6 * std::max(1.0, std::abs(fd_lap)));
  }

  const BoxDomain dyn({-1.0, -1.0}, {1.0, 1.0}, 1.0);
  const PointBlock tp = random_points(30, {-0.9, -0.9, 0.05}, {0.9, 0.9, 0.95}, 9);
  for (Index r = 0; r < tp.rows(); ++r) {
    const auto x = row_vec(tp, r);
    const PointProjection a = apply_A(f, dyn, x, 2);
    auto blend = [&](const std::vector<double>& y) { return blend_faces(fv, dyn, y); };
    const double h = 1e-5;
    auto yp = x, ym = x;
    yp[2] += h;
    ym[2] -= h;
    CHECK(a.value == doctest::Approx(blend(x)).epsilon(1e-13));
    CHECK(a.grad[2] == doctest::Approx((blend(yp) - blend(ym)) / (2 * h)).epsilon(1e-7));
    CHECK(std::abs(a.diag2[2]) == 0.0);
  }
}

TEST_CASE("mismatch rows vanish when the free function equals the boundary data") {
  const BoxDomain box = BoxDomain::cube(3, -1, 1);
  const FeatureLayer layer = init_layer(3, 12, 1.0, 5);
  UniformSource rng(1);
  Vector phi(12);
  for (Index j = 0; j < 12; ++j) phi(j) = rng.closed(-1, 1);
  const ScalarField g([&](std::span<const double> x) {
    return network_value(layer, phi, std::vector<double>(x.begin(), x.end()));
  });
  const PdeProblem p = problem_with_boundary(box, g);
  const PointBlock y = sample_collocation(box, 0, 10, 0, 4).condition_points();
  const MismatchRows mm = mismatch_rows(layer, p, y);
  CHECK((mm.rows * phi - mm.rhs).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("two-dimensional mismatch rows reduce to the corner combination") {
  const double a = -1.0, b = 2.0;
  const BoxDomain box = BoxDomain::cube(2, a, b);
  const FeatureLayer layer = init_layer(2, 9, 1.0, 6);
  const ScalarField h = smooth_field();
  const PdeProblem p = problem_with_boundary(box, h);
  UniformSource rng(2);
  Vector phi(9);
  for (Index j = 0; j < 9; ++j) phi(j) = rng.closed(-1, 1);
  auto g = [&](double x0, double x1) { return network_value(layer, phi, {x0, x1}); };
  auto H = [&](double x0, double x1) { return smooth({x0, x1}); };

  PointBlock y(5, 2);
  for (Index r = 0; r < 5; ++r) y.row(r) << rng.closed(a, b), a;
  const MismatchRows mm = mismatch_rows(layer, p, y);
  for (Index r = 0; r < 5; ++r) {
    const double x1 = y(r, 0);
    const double pa = (b - x1) / (b - a), pb = (x1 - a) / (b - a);
    const double expect = (H(a, a) - g(a, a)) * pa + (H(b, a) - g(b, a)) * pb;
    CHECK((mm.rows.row(r) * phi)(0) - mm.rhs(r) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("mismatch identity against a direct evaluation of u - H") {
  SUBCASE("stationary cube, d = 3") {
    const PdeProblem p = make_problem("poisson", 3);
    const FeatureLayer layer = init_layer(3, 40, 1.0, 7);
    UniformSource rng(3);
    Vector phi(40);
    for (Index j = 0; j < 40; ++j) phi(j) = rng.closed(-1, 1);
    const CollocationSet c = sample_collocation(p.domain, 0, 9, 0, 11);
    const PointBlock y = c.condition_points().topRows(50);
    const MismatchRows mm = mismatch_rows(layer, p, y);
    auto g = [&](const std::vector<double>& x) { return network_value(layer, phi, x); };
    auto H = [&](const std::vector<double>& x) { return p.boundary(x); };
    for (Index r = 0; r < y.rows(); ++r) {
      const auto x = row_vec(y, r);
      const double u = g(x) - blend_faces(g, p.domain, x) + blend_faces(H, p.domain, x);
      CHECK(std::abs((u - H(x)) - ((mm.rows.row(r) * phi)(0) - mm.rhs(r))) <= 1e-12);
    }
  }
  SUBCASE("time-dependent box including the initial face") {
    const PdeProblem p = make_problem("heat", 2);
    const FeatureLayer layer = init_layer(3, 30, 1.0, 8);
    UniformSource rng(4);
    Vector phi(30);
    for (Index j = 0; j < 30; ++j) phi(j) = rng.closed(-1, 1);
    const PointBlock y = sample_collocation(p.domain, 0, 5, 10, 12).condition_points();
    const MismatchRows mm = mismatch_rows(layer, p, y);
    auto g = [&](const std::vector<double>& x) { return network_value(layer, phi, x); };
    auto H = [&](const std::vector<double>& x) { return p.boundary(x); };
    for (Index r = 0; r < y.rows(); ++r) {
      const auto x = row_vec(y, r);
      const double u = g(x) - blend_faces(g, p.domain, x) + blend_faces(H, p.domain, x);
      CHECK(std::abs((u - H(x)) - ((mm.rows.row(r) * phi)(0) - mm.rhs(r))) <= 1e-12);
    }
  }
}

TEST_CASE("in one dimension the constrained expression meets the boundary data exactly") {
  const PdeProblem p = make_problem("poisson", 1);
  const FeatureLayer layer = init_layer(1, 15, 2.0, 9);
  PointBlock y(2, 1);
  y << -1.0, 1.0;
  const MismatchRows mm = mismatch_rows(layer, p, y);
  CHECK(mm.rows.cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(mm.rhs.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("mismatch rows reject interior points") {
  const PdeProblem p = make_problem("poisson", 2);
  PointBlock y(1, 2);
  y << 0.1, 0.2;
  CHECK_THROWS_AS(mismatch_rows(init_layer(2, 3, 1.0, 1), p, y), InvalidArgument);
}

TEST_CASE("full TFC enumeration") {
  auto f2 = [](std::span<const double> x) { return std::sin(x[0]) * std::exp(x[1]) + x[0] * x[1]; };
  auto f3 = [](std::span<const double> x) { return std::cos(x[0] + 2 * x[1]) * (1 + x[2] * x[2]) + x[0]; };

  const std::vector<double> x3{0.1, 0.2, 0.3};
  CHECK(full_tfc_oracle(f3, BoxDomain::cube(3, -1, 1), x3).terms == 26);
  CHECK(full_tfc_oracle(f2, BoxDomain::cube(2, -1, 1), std::vector<double>{0.0, 0.0}).terms == 8);

  SUBCASE("interpolation on the boundary") {
    const BoxDomain b2 = BoxDomain::cube(2, -1, 2);
    for (const auto& face : sample_faces(b2, 20, 0, 1).faces)
      for (Index r = 0; r < face.rows(); ++r) {
        const auto y = row_vec(face, r);
        CHECK(std::abs(full_tfc_oracle(f2, b2, y).value - f2(y)) <= 1e-12);
      }
    const BoxDomain b3 = BoxDomain::cube(3, -1, 1);
    for (const auto& face : sample_faces(b3, 20, 0, 2).faces)
      for (Index r = 0; r < face.rows(); ++r) {
        const auto y = row_vec(face, r);
        CHECK(std::abs(full_tfc_oracle(f3, b3, y).value - f3(y)) <= 1e-12);
      }
  }

  SUBCASE("two-dimensional closed form") {
    const double a = -1.0, b = 2.0;
    const BoxDomain box = BoxDomain::cube(2, a, b);
    const PointBlock pts = random_cube_points(100, 2, a, b, 3);
    for (Index r = 0; r < pts.rows(); ++r) {
      const double x0 = pts(r, 0), x1 = pts(r, 1);
      auto F = [&](double u, double v) { return f2(std::vector<double>{u, v}); };
      const double p0a = (b - x0) / (b - a), p0b = (x0 - a) / (b - a);
      const double p1a = (b - x1) / (b - a), p1b = (x1 - a) / (b - a);
      const double t1 = p0a * F(a, x1) + p0b * F(b, x1) + p1a * F(x0, a) + p1b * F(x0, b);
      const double t2 = p0a * p1a * F(a, a) + p0a * p1b * F(a, b) + p0b * p1a * F(b, a) + p0b * p1b * F(b, b);
      CHECK(full_tfc_oracle(f2, box, row_vec(pts, r)).value == doctest::Approx(t1 - t2).epsilon(1e-13));
    }
  }

  SUBCASE("A equals the first TFC level") {
    for (int d = 1; d <= 3; ++d) {
      auto f = [d](std::span<const double> x) {
        double s = 0;
        for (int k = 0; k < d; ++k) s += (k + 1) * x[k];
        return std::sin(s) + x[0] * x[0];
      };
      const BoxDomain box = BoxDomain::cube(d, -1, 1);
      const PointBlock pts = random_cube_points(20, d, -1, 1, 10 + d);
      for (Index r = 0; r < pts.rows(); ++r) {
        const auto x = row_vec(pts, r);
        const double a = apply_A(ScalarField(f), box, x, 0).value;
        CHECK(std::abs(a - full_tfc_oracle(f, box, x).levels[0]) <= 1e-12);
      }
    }
  }

  CHECK_THROWS_AS(full_tfc_oracle(f2, BoxDomain::cube(4, -1, 1), std::vector<double>(4, 0.0)),
                  UnsupportedConfiguration);
}

TEST_CASE("constrained features are V minus A V") {
  const BoxDomain box = BoxDomain::cube(2, -1, 1);
  const FeatureLayer layer = init_layer(2, 5, 1.0, 3);
  const PointBlock pts = random_cube_points(7, 2, -1, 1, 4);
  const FeatureEval c = constrained_features(layer, box, pts, 1);
  for (Index r = 0; r < pts.rows(); ++r) {
    const auto x = row_vec(pts, r);
    for (int j = 0; j < 5; ++j) {
      Vector e = Vector::Zero(5);
      e(j) = 1.0;
      auto v = [&](const std::vector<double>& y) { return network_value(layer, e, y); };
      CHECK(c.values(r, j) == doctest::Approx(v(x) - blend_faces(v, box, x)).epsilon(1e-13));
    }
  }
}
