#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bregman/operators.hpp"
#include "support.hpp"

using namespace bregman;
using testing::Gen;

namespace {

Vector vec(std::initializer_list<double> v) { return PrimalPoint(v).coords(); }

const auto sq2 = LegendreFunction::squared_norm(2);

BsneMapping halfspace_map(const LegendreFunction& f, const Vector& a, double b) {
  return BsneMapping::projection(f, ConvexSet::halfspace(a, b));
}

}  // namespace

TEST_CASE("factories check geometry and witnesses") {
  const auto a = halfspace_map(sq2, vec({1.0, 0.0}), 1.0);
  const auto b = halfspace_map(LegendreFunction::power_p(3.0, 2), vec({0.0, 1.0}), 1.0);
  CHECK_THROWS_AS(BsneMapping::composition({a, b}), PreconditionError);
  CHECK_THROWS_AS(BsneMapping::composition({}), PreconditionError);
  CHECK_THROWS_AS(BsneMapping::projection(sq2, ConvexSet::halfspace(vec({1.0, 0.0}), 1.0), PrimalPoint{2.0, 0.0}),
                  PreconditionError);
  // Disjoint halfspaces share no witness.
  CHECK_THROWS_AS(BsneMapping::composition({a, halfspace_map(sq2, vec({-1.0, 0.0}), -2.0)}), PreconditionError);

  const auto theta = Bifunction::operator_induced(Matrix::Identity(2, 2), vec({0.0, 0.0}));
  CHECK_THROWS_AS(BsneMapping::resolvent(sq2, theta, ConvexFunctional::zero(), ConvexSet::whole_space(2),
                                         PrimalPoint{1.0, 0.0}),
                  PreconditionError);
  const auto res =
      BsneMapping::resolvent(sq2, theta, ConvexFunctional::zero(), ConvexSet::whole_space(2), PrimalPoint{0.0, 0.0});
  CHECK(res.type_name() == "resolvent");
  CHECK(a.type_name() == "projection");
  CHECK(BsneMapping::composition({a, res}).type_name() == "composition");
}

TEST_CASE("apply examples") {
  const auto a = halfspace_map(sq2, vec({1.0, 0.0}), 1.0);
  CHECK(apply(a, PrimalPoint{0.5, 9.0}) == PrimalPoint{0.5, 9.0});

  const auto t = BsneMapping::composition({a, halfspace_map(sq2, vec({0.0, 1.0}), 1.0)});
  CHECK(max_abs_diff(apply(t, PrimalPoint{2.0, 2.0}), PrimalPoint{1.0, 1.0}) <= 1e-12);

  const auto h1 = BsneMapping::projection(sq2, ConvexSet::hyperplane(vec({1.0, 0.0}), 0.0));
  const auto h2 = BsneMapping::projection(sq2, ConvexSet::hyperplane(vec({1.0, 1.0}) / std::sqrt(2.0), 0.0));
  CHECK(max_abs_diff(apply(h1, PrimalPoint{1.0, 1.0}), PrimalPoint{0.0, 1.0}) <= 1e-12);
  CHECK(max_abs_diff(apply(BsneMapping::composition({h1, h2}), PrimalPoint{1.0, 1.0}), PrimalPoint{-0.5, 0.5}) <=
        1e-12);
  // The reverse order gives a different point.
  CHECK(max_abs_diff(apply(BsneMapping::composition({h2, h1}), PrimalPoint{1.0, 1.0}), PrimalPoint{0.0, 0.0}) <=
        1e-12);
}

TEST_CASE("fixed_point_residual examples") {
  const auto a = halfspace_map(sq2, vec({1.0, 0.0}), 1.0);
  const auto r = fixed_point_residual(sq2, a, PrimalPoint{2.0, 0.0});
  CHECK(r.bregman == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.sup_norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fixed_point_residual(sq2, a, a.witness()).bregman <= 1e-9);

  const auto t = BsneMapping::composition({a, halfspace_map(sq2, vec({0.0, 1.0}), 1.0),
                                           BsneMapping::projection(sq2, ConvexSet::hyperplane(vec({1.0, -1.0}), 0.0))},
                                          PrimalPoint{-1.0, -1.0});
  CHECK(fixed_point_residual(sq2, t, PrimalPoint{-1.0, -1.0}).bregman <= 1e-9);
  CHECK(fixed_point_residual(sq2, t, t.witness()).sup_norm <= kWitnessTol);
}

TEST_CASE("quasi_bregman_check examples") {
  const auto a = halfspace_map(sq2, vec({1.0, 0.0}), 1.0);
  const PrimalPoint p{0.0, 0.0};
  CHECK(quasi_bregman_check(sq2, a, p, p) == 0.0);
  CHECK_THROWS_AS(quasi_bregman_check(sq2, a, PrimalPoint{3.0, 0.0}, p), PreconditionError);
}

TEST_CASE("property: quasi-Bregman nonexpansiveness") {
  for (const auto& f : testing::geometries(3)) {
    Gen g(11);
    const bool pos = f.positive_domain();
    const Vector p = pos ? vec({1.0, 0.5, 2.0}) : vec({0.5, -0.5, 0.25});
    for (int k = 0; k < 100; ++k) {
      const Vector a1 = g.unit(3), a2 = g.unit(3), a3 = g.unit(3);
      const auto m1 = BsneMapping::projection(f, ConvexSet::halfspace(a1, a1.dot(p) + g.uniform(0.0, 0.5)));
      const auto m2 = BsneMapping::projection(f, ConvexSet::hyperplane(a2, a2.dot(p)));
      const auto m3 = BsneMapping::projection(f, ConvexSet::halfspace(a3, a3.dot(p)));
      const auto t = BsneMapping::composition({m1, m2, m3}, PrimalPoint(p));
      const Vector xv = pos ? Vector(p.cwiseProduct(g.normal_vector(3).array().exp().matrix()))
                            : Vector(p + g.normal_vector(3, 2.0));
      const PrimalPoint x(xv);
      CHECK(quasi_bregman_check(f, m1, PrimalPoint(p), x) <= 1e-10);
      CHECK(quasi_bregman_check(f, t, PrimalPoint(p), x) <= 1e-8);
    }
  }
}

TEST_CASE("property: composition witnesses and iterated fixed points") {
  Gen g(12);
  for (int k = 0; k < 50; ++k) {
    const Vector c = g.normal_vector(2);
    const Vector a1 = g.unit(2), a2 = g.unit(2);
    const auto s1 = ConvexSet::halfspace(a1, a1.dot(c));
    const auto s2 = ConvexSet::box(c - Vector::Constant(2, 1.0), c + Vector::Constant(2, 1.0));
    const auto s3 = ConvexSet::halfspace(a2, a2.dot(c) + 0.1);
    const auto t = BsneMapping::composition(
        {BsneMapping::projection(sq2, s1), BsneMapping::projection(sq2, s2), BsneMapping::projection(sq2, s3)},
        PrimalPoint(c));
    CHECK(fixed_point_residual(sq2, t, t.witness()).sup_norm <= 1e-9);

    PrimalPoint x(c + g.normal_vector(2, 4.0));
    double res = 1.0;
    for (int it = 0; it < 100000 && res > 1e-12; ++it) {
      const PrimalPoint tx = apply(t, x);
      res = max_abs_diff(tx, x);
      x = tx;
    }
    REQUIRE(res <= 1e-12);
    CHECK(contains(s1, x, 1e-6));
    CHECK(contains(s2, x, 1e-6));
    CHECK(contains(s3, x, 1e-6));
  }
}

TEST_CASE("resolvent members fix the equilibrium solution") {
  const auto f = LegendreFunction::power_p(3.0, 2);
  const Vector p = vec({0.5, -0.25});
  const Matrix m = (Matrix(2, 2) << 1.0, 1.0, -1.0, 1.0).finished();
  const auto res = BsneMapping::resolvent(f, Bifunction::operator_induced(m, -m * p), ConvexFunctional::zero(),
                                          ConvexSet::whole_space(2), PrimalPoint(p));
  const auto proj = BsneMapping::projection(f, ConvexSet::halfspace(vec({1.0, 1.0}), 0.25));
  const auto t = BsneMapping::composition({res, proj});
  CHECK(t.witness() == PrimalPoint(p));
  CHECK(fixed_point_residual(f, t, PrimalPoint(p)).sup_norm <= 1e-9);
  Gen g(13);
  for (int k = 0; k < 20; ++k) {
    const PrimalPoint x(p + g.normal_vector(2, 2.0));
    CHECK(quasi_bregman_check(f, res, PrimalPoint(p), x) <= 1e-8);
    CHECK(quasi_bregman_check(f, t, PrimalPoint(p), x) <= 1e-8);
  }
}
