#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <thread>

#include "bregman/legendre.hpp"
#include "support.hpp"

using namespace bregman;
using testing::Gen;

namespace {

const auto sq1 = LegendreFunction::squared_norm(1);
const auto sq2 = LegendreFunction::squared_norm(2);
const auto p3_1 = LegendreFunction::power_p(3.0, 1);
const auto ent2 = LegendreFunction::neg_entropy(2);

}  // namespace

TEST_CASE("points reject non-finite coordinates") {
  CHECK_THROWS_AS(PrimalPoint({1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(DualPoint({std::numeric_limits<double>::infinity()}), DomainError);
  CHECK(PrimalPoint({1.0, 2.0}).dim() == 2);
}

TEST_CASE("geometry construction") {
  CHECK_THROWS_AS(LegendreFunction::power_p(1.0, 2), DomainError);
  CHECK_THROWS_AS(LegendreFunction::power_p(0.5, 2), DomainError);
  CHECK_THROWS_AS(LegendreFunction::squared_norm(0), DomainError);
  const auto f = LegendreFunction::power_p(3.0, 2);
  CHECK(1.0 / f.p() + 1.0 / f.q() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.strongly_coercive());
  CHECK(f.cofinite());
  CHECK_FALSE(f.positive_domain());
  CHECK(ent2.positive_domain());
}

TEST_CASE("eval") {
  CHECK(eval(sq2, PrimalPoint{3.0, 4.0}) == doctest::Approx(12.5));
  CHECK(eval(p3_1, PrimalPoint{2.0}) == doctest::Approx(8.0 / 3.0));
  CHECK(eval(sq2, PrimalPoint::zero(2)) == 0.0);
  CHECK(eval(LegendreFunction::power_p(3.0, 2), PrimalPoint::zero(2)) == 0.0);
  CHECK(eval(ent2, PrimalPoint{1.0, std::exp(1.0)}) == doctest::Approx(std::exp(1.0)));
  CHECK_THROWS_AS(eval(ent2, PrimalPoint{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(eval(ent2, PrimalPoint{1.0, -2.0}), DomainError);
  CHECK_THROWS_AS(eval(sq2, PrimalPoint{1.0}), DomainError);
}

TEST_CASE("grad") {
  CHECK(grad(p3_1, PrimalPoint{2.0})[0] == doctest::Approx(4.0));
  CHECK(grad(sq2, PrimalPoint{1.0, -2.0}) == DualPoint{1.0, -2.0});
  CHECK(grad(p3_1, PrimalPoint{0.0})[0] == 0.0);
  CHECK(grad(p3_1, PrimalPoint{-2.0})[0] == doctest::Approx(-4.0));
  CHECK(grad(ent2, PrimalPoint{1.0, 2.0})[1] == doctest::Approx(1.0 + std::log(2.0)));
  CHECK_THROWS_AS(grad(ent2, PrimalPoint{0.0, 1.0}), DomainError);
}

TEST_CASE("conj") {
  CHECK(conj(sq2, DualPoint{3.0, 4.0}) == doctest::Approx(12.5));
  CHECK(conj(p3_1, DualPoint{4.0}) == doctest::Approx(16.0 / 3.0));
  CHECK(conj(sq2, DualPoint{0.0, 0.0}) == 0.0);
  CHECK(conj(p3_1, DualPoint{0.0}) == 0.0);
  CHECK(conj(ent2, DualPoint{1.0, 2.0}) == doctest::Approx(1.0 + std::exp(1.0)));
}

TEST_CASE("grad_conj") {
  CHECK(grad_conj(p3_1, DualPoint{4.0})[0] == doctest::Approx(2.0));
  CHECK(grad_conj(sq1, DualPoint{5.0})[0] == 5.0);
  for (const auto& f : {sq2, LegendreFunction::power_p(3.0, 2), LegendreFunction::power_p(1.5, 2)}) {
    const PrimalPoint x{0.3, -1.7};
    CHECK(max_abs_diff(grad_conj(f, grad(f, x)), x) <= 1e-12);
  }
  const PrimalPoint xe{0.3, 1.7};
  CHECK(max_abs_diff(grad_conj(ent2, grad(ent2, xe)), xe) <= 1e-12);
}

TEST_CASE("bregman_distance") {
  Gen g(1);
  for (const auto& f : testing::geometries(3)) {
    const PrimalPoint x(g.point(f));
    CHECK(bregman_distance(f, x, x) == doctest::Approx(0.0));
  }
  CHECK(bregman_distance(p3_1, PrimalPoint{2.0}, PrimalPoint{1.0}) == doctest::Approx(4.0 / 3.0));
  CHECK(bregman_distance(sq2, PrimalPoint{3.0, 4.0}, PrimalPoint{0.0, 0.0}) == doctest::Approx(12.5));
  const double kl = 1.0 * std::log(1.0 / 2.0) - 1.0 + 2.0 + 3.0 * std::log(3.0 / 0.5) - 3.0 + 0.5;
  CHECK(bregman_distance(ent2, PrimalPoint{1.0, 3.0}, PrimalPoint{2.0, 0.5}) == doctest::Approx(kl));
  CHECK_THROWS_AS(bregman_distance(ent2, PrimalPoint{1.0, 1.0}, PrimalPoint{1.0, -1.0}), DomainError);
}

TEST_CASE("v_fun") {
  CHECK(v_fun(sq2, PrimalPoint{1.0, 0.0}, DualPoint{0.0, 1.0}) == doctest::Approx(1.0));
  Gen g(2);
  for (const auto& f : testing::geometries(2)) {
    const PrimalPoint x(g.point(f));
    CHECK(std::abs(v_fun(f, x, grad(f, x))) <= 1e-12);
  }
  CHECK(v_fun(p3_1, PrimalPoint{1.0}, DualPoint{4.0}) == doctest::Approx(5.0 / 3.0));
  CHECK(bregman_distance(p3_1, PrimalPoint{1.0}, PrimalPoint{2.0}) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("dual_average") {
  const std::array<double, 2> half{0.5, 0.5};
  const std::array<PrimalPoint, 2> pts{PrimalPoint{0.0, 0.0}, PrimalPoint{2.0, 2.0}};
  CHECK(dual_average(sq2, half, pts) == PrimalPoint{1.0, 1.0});

  const std::array<double, 1> one{1.0};
  const std::array<PrimalPoint, 1> single{PrimalPoint{0.7, -0.2}};
  CHECK(max_abs_diff(dual_average(LegendreFunction::power_p(3.0, 2), one, single), single[0]) <= 1e-15);

  const std::array<PrimalPoint, 2> p1d{PrimalPoint{1.0}, PrimalPoint{2.0}};
  CHECK(dual_average(p3_1, half, p1d)[0] == doctest::Approx(std::sqrt(2.5)));

  const std::array<double, 2> bad_sum{0.5, 0.6};
  const std::array<double, 2> negative{1.5, -0.5};
  CHECK_THROWS_AS(dual_average(sq2, bad_sum, pts), WeightError);
  CHECK_THROWS_AS(dual_average(sq2, negative, pts), WeightError);
  const std::array<double, 2> near{0.5, 0.5 + 1e-13};
  CHECK_NOTHROW(dual_average(sq2, near, pts));
}

TEST_CASE("total convexity modulus") {
  CHECK(estimate_total_convexity_modulus(sq2, PrimalPoint{1.0, 2.0}, 0.0, 10).modulus == 0.0);
  const auto e = estimate_total_convexity_modulus(sq2, PrimalPoint{-1.0, 3.0}, 2.0, 50);
  CHECK(e.modulus == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.samples == 50);

  // Two-point sphere in one dimension: min(D(1.5, 1), D(0.5, 1)).
  const double expected = std::min(testing::power_distance(3.0, 1.5, 1.0), testing::power_distance(3.0, 0.5, 1.0));
  CHECK(expected == doctest::Approx(5.0 / 24.0));
  const auto p = estimate_total_convexity_modulus(p3_1, PrimalPoint{1.0}, 0.5, 2);
  CHECK(p.modulus == doctest::Approx(expected).epsilon(1e-14));

  for (const auto& f : testing::geometries(3)) {
    Gen g(3);
    const auto est = estimate_total_convexity_modulus(f, PrimalPoint(g.point(f)), 0.1, 40);
    CHECK(est.modulus > 0.0);
  }
  CHECK_THROWS_AS(estimate_total_convexity_modulus(sq2, PrimalPoint{0.0, 0.0}, 1.0, 0), SampleError);
  CHECK_THROWS_AS(estimate_total_convexity_modulus(sq2, PrimalPoint{0.0, 0.0}, -1.0, 3), DomainError);
}

// ---------------------------------------------------------------------------
// Properties over random points

TEST_CASE("property: nonnegativity and strict convexity") {
  for (const auto& f : testing::geometries(3)) {
    Gen g(10);
    for (int k = 0; k < 1000; ++k) {
      const PrimalPoint x(g.point(f));
      const PrimalPoint y(g.point(f));
      const double d = bregman_distance(f, x, y);
      CHECK(d >= -1e-12);
      if (max_abs_diff(x, y) > 1e-3) CHECK(d > 0.0);
      const PrimalPoint mid(Vector(0.5 * (x.coords() + y.coords())));
      CHECK(eval(f, mid) < 0.5 * (eval(f, x) + eval(f, y)));
    }
  }
}

TEST_CASE("property: gradient inverse and V bridge") {
  for (const auto& f : testing::geometries(4)) {
    Gen g(11);
    for (int k = 0; k < 1000; ++k) {
      const PrimalPoint x(g.point(f));
      CHECK(max_abs_diff(grad_conj(f, grad(f, x)), x) <= 1e-9);
      const DualPoint xs(g.normal_vector(4));
      CHECK(std::abs(v_fun(f, x, xs) - bregman_distance(f, x, grad_conj(f, xs))) <= 1e-10);
    }
  }
}

TEST_CASE("property: subdifferential inequality for V") {
  for (const auto& f : testing::geometries(3)) {
    Gen g(12);
    for (int k = 0; k < 1000; ++k) {
      const PrimalPoint x(g.point(f));
      const DualPoint xs(g.normal_vector(3));
      const DualPoint ys(g.normal_vector(3));
      const DualPoint sum(Vector(xs.coords() + ys.coords()));
      const double lhs = v_fun(f, x, xs) + ys.coords().dot(grad_conj(f, xs).coords() - x.coords());
      CHECK(lhs <= v_fun(f, x, sum) + 1e-10);
    }
  }
}

TEST_CASE("property: Jensen inequality for dual averages") {
  for (const auto& f : testing::geometries(3)) {
    Gen g(13);
    for (int k = 0; k < 1000; ++k) {
      const auto w = g.weights(3);
      const std::vector<PrimalPoint> pts{PrimalPoint(g.point(f)), PrimalPoint(g.point(f)), PrimalPoint(g.point(f))};
      const PrimalPoint z(g.point(f));
      const PrimalPoint avg = dual_average(f, w, pts);
      double rhs = 0.0;
      for (std::size_t i = 0; i < 3; ++i) rhs += w[i] * bregman_distance(f, z, pts[i]);
      CHECK(bregman_distance(f, z, avg) <= rhs + 1e-10);
    }
  }
}

TEST_CASE("property: three-point identity") {
  for (const auto& f : testing::geometries(3)) {
    Gen g(14);
    for (int k = 0; k < 1000; ++k) {
      const PrimalPoint p(g.point(f)), x(g.point(f)), z(g.point(f));
      const Vector gx = grad(f, x).coords();
      const Vector gz = grad(f, z).coords();
      const double lhs = bregman_distance(f, p, x) - bregman_distance(f, p, z);
      const double rhs =
          eval(f, z) - eval(f, x) + gz.dot(x.coords() - z.coords()) + (gz - gx).dot(p.coords() - x.coords());
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(eval(f, p)) + std::abs(eval(f, x))));
    }
  }
}

TEST_CASE("property: sequential consistency probe") {
  for (const auto& f : testing::geometries(2)) {
    Gen g(15);
    std::vector<double> dist, gap;
    for (int n = 1; n <= 1000; ++n) {
      const Vector x = g.point(f, 1.0);
      Vector y = x + g.unit(2) / n;
      if (f.positive_domain()) y = x.cwiseProduct((g.unit(2) / n).array().exp().matrix());
      dist.push_back(bregman_distance(f, PrimalPoint(y), PrimalPoint(x)));
      gap.push_back((y - x).cwiseAbs().maxCoeff());
    }
    // Both sequences fall by orders of magnitude over the run.
    auto tail_max = [](const std::vector<double>& v, std::size_t from) {
      return *std::max_element(v.begin() + static_cast<long>(from), v.end());
    };
    CHECK(tail_max(dist, 900) < 1e-3 * tail_max(dist, 0));
    CHECK(tail_max(gap, 900) < 1e-2 * tail_max(gap, 0) + 1e-12);
  }
}

TEST_CASE("concurrent evaluation gives identical results") {
  const auto f = LegendreFunction::power_p(3.0, 5);
  Gen g(16);
  const PrimalPoint x(g.point(f)), y(g.point(f));
  const double ref = bregman_distance(f, x, y);
  std::array<double, 8> out{};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < out.size(); ++t) {
    pool.emplace_back([&, t] {
      for (int k = 0; k < 1000; ++k) out[t] = bregman_distance(f, x, y);
    });
  }
  for (auto& th : pool) th.join();
  for (double v : out) CHECK(v == ref);
}
