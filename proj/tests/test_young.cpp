#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "maxlab/young.hpp"

using namespace maxlab;

namespace {

// Golden-section maximum of a concave map on [lo, hi]; test-local oracle.
double golden_max(const std::function<double(double)>& fn, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int k = 0; k < 300 && b - a > 1e-15 * std::max(1.0, b); ++k) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (fn(c) < fn(d)) a = c; else b = d;
  }
  return fn(0.5 * (a + b));
}

double legendre(const std::function<double(double)>& phi, double r, double s_hi) {
  return golden_max([&](double s) { return r * s - phi(s); }, 0.0, s_hi);
}

}  // namespace

TEST_SUITE("young") {

TEST_CASE("evaluation") {
  CHECK(YoungFunction::power(2)(3.0) == 9.0);
  const auto linf = YoungFunction::linfinity();
  CHECK(linf(0.7) == 0.0);
  CHECK(linf(1.0) == 0.0);
  CHECK(linf(1.2) == kInf);
  const auto p1 = YoungFunction::power(1);
  for (double t : {0.0, 1.0, 5.0}) CHECK(p1(t) == t);
  CHECK_THROWS_AS(p1(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::power(0.5), std::invalid_argument);
}

TEST_CASE("generalized inverse") {
  CHECK(YoungFunction::power(2).inverse(4.0) == doctest::Approx(2.0).epsilon(1e-14));
  const auto linf = YoungFunction::linfinity();
  for (double s : {0.0, 1e-9, 0.5, 1.0, 1e9}) CHECK(linf.inverse(s) == 1.0);
  for (double p : {1.0, 1.5, 4.0}) {
    const auto phi = YoungFunction::power(p);
    for (double r : {1e-3, 1.0, 1e3}) CHECK(phi.inverse(phi(r)) == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK(YoungFunction::power(2).inverse(kInf) == kInf);
  CHECK(YoungFunction::power(2).inverse(0.0) == 0.0);
}

TEST_CASE("class Y membership") {
  CHECK(YoungFunction::power(1).in_class_y());
  CHECK_FALSE(YoungFunction::linfinity().in_class_y());
  CHECK(YoungFunction::tabulated({1.0, 2.0}, {1.0, 3.0}, 1.0, 2.0).in_class_y());
  CHECK_FALSE(YoungFunction::tabulated({0.0, 1.0}, {0.0, 1.0}, 1.0, kInf).in_class_y());
}

TEST_CASE("tabulated validation") {
  CHECK_THROWS_AS(YoungFunction::tabulated({1.0, 2.0, 3.0}, {1.0, 3.0, 4.0}, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::tabulated({2.0, 1.0}, {1.0, 3.0}, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(YoungFunction::tabulated({1.0, 2.0}, {1.0, 3.0}, 0.5, 2.0), std::invalid_argument);
  const auto t = YoungFunction::tabulated({1.0, 2.0, 4.0}, {1.0, 4.0, 16.0}, 2.0, 2.0);
  CHECK(t(0.5) == doctest::Approx(0.25));
  CHECK(t(3.0) == doctest::Approx(10.0));
  CHECK(t(8.0) == doctest::Approx(64.0));
  CHECK(t.inverse(10.0) == doctest::Approx(3.0));
  CHECK(t.inverse(64.0) == doctest::Approx(8.0));
}

TEST_CASE("monotone eval and inverse round trips") {
  const auto grid = log_grid(1e-6, 1e6, 241);
  for (const auto& phi : {YoungFunction::power(1), YoungFunction::power(1.5), YoungFunction::power(3, 2.0),
                          YoungFunction::tabulated({1.0, 2.0, 4.0}, {1.0, 4.0, 16.0}, 2.0, 3.0)}) {
    double prev_e = 0.0, prev_i = 0.0;
    for (double r : grid) {
      const double e = phi(r), i = phi.inverse(r);
      CHECK(e >= prev_e);
      CHECK(i >= prev_i);
      prev_e = e;
      prev_i = i;
      CHECK(phi.inverse(e) == doctest::Approx(r).epsilon(1e-10));
      CHECK(phi(i) == doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed-form conjugates") {
  const auto c1 = conjugate(YoungFunction::power(1));
  CHECK(c1.is_linfinity());
  CHECK(c1(0.5) == 0.0);
  CHECK(c1(1.0) == 0.0);
  CHECK(c1(1.5) == kInf);
  CHECK(conjugate(YoungFunction::linfinity()).is_power());
  const auto c2 = conjugate(YoungFunction::power(2));
  CHECK(c2(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double p : {1.5, 2.0, 4.0}) {
    const auto phi = YoungFunction::power(p);
    const auto cj = conjugate(phi);
    const double pp = p / (p - 1.0);
    for (double r : {0.01, 0.5, 1.0, 3.0, 40.0}) {
      CHECK(cj(r) == doctest::Approx((p - 1.0) * std::pow(p, -pp) * std::pow(r, pp)).epsilon(1e-12));
      CHECK(cj(r) == doctest::Approx(legendre(phi, r, std::pow(r, 1.0 / (p - 1.0)) * 4.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("biconjugation against a direct double maximization") {
  const auto phi = YoungFunction::power(1.5);
  const auto bi = conjugate(conjugate(phi));
  const std::function<double(double)> inner = [&](double s) { return legendre(phi, s, 4.0 * s * s + 10.0); };
  for (double r : log_grid(1e-2, 1e2, 21)) {
    CHECK(bi(r) == doctest::Approx(phi(r)).epsilon(1e-12));
    const double direct = legendre(inner, r, 4.0 * std::sqrt(r) + 4.0);
    CHECK(direct == doctest::Approx(phi(r)).epsilon(1e-6));
  }
}

TEST_CASE("numeric conjugates") {
  for (double p : {1.5, 2.0, 4.0}) {
    const auto phi = YoungFunction::power(p);
    const auto num = numeric_conjugate(phi);
    const auto cf = conjugate(phi);
    const auto& tab = std::get<YoungFunction::Tabulated>(num.family());
    for (std::size_t k = 0; k < tab.t.size(); k += 37)
      CHECK(tab.v[k] == doctest::Approx(cf(tab.t[k])).epsilon(1e-9));
    CHECK(std::abs(tabulated_loglog_slope(num, 1e-6, 1e6) - p / (p - 1.0)) < 1e-3);
    const auto bi = numeric_conjugate(num);
    for (double r : log_grid(1e-3, 1e3, 13)) CHECK(bi(r) == doctest::Approx(phi(r)).epsilon(5e-3));
  }
  // Power(1): conjugate is 0 up to 1 and infinite beyond.
  const auto num1 = numeric_conjugate(YoungFunction::power(1));
  CHECK(num1(0.5) == 0.0);
  CHECK(num1(1.01) == kInf);
  CHECK(num1.inverse(1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(conjugate_value(YoungFunction::power(2), 2.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("conjugate pair bounds") {
  // Phi^{-1}(1) * conj^{-1}(1) = 1 * 2 for Power(2): exactly the upper bound.
  const auto p2 = YoungFunction::power(2);
  CHECK(p2.inverse(1.0) * conjugate(p2).inverse(1.0) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> one{1.0};
  CHECK(check_young_pair(p2, one).ok);
  const auto p1 = check_young_pair(YoungFunction::power(1), log_grid(1e-3, 1e3, 7));
  CHECK(p1.ok);
  CHECK(p1.min_ratio == doctest::Approx(1.0));
  CHECK(p1.max_ratio == doctest::Approx(1.0));
  const auto grid = log_grid(1e-6, 1e6, 100);
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0})
    for (auto mode : {ConjugateMode::closed_form, ConjugateMode::numeric}) {
      const auto rep = check_young_pair(YoungFunction::power(p), grid, mode);
      CHECK(rep.ok);
      CHECK(rep.min_ratio >= 1.0 - 1e-6);
      CHECK(rep.max_ratio <= 2.0 + 1e-6);
      CHECK_FALSE(rep.offending_r.has_value());
    }
  // For Power(p) the ratio is p / (p-1)^{(p-1)/p} at every r.
  const auto r15 = check_young_pair(YoungFunction::power(1.5), grid);
  CHECK(r15.max_ratio == doctest::Approx(1.5 / std::pow(0.5, 1.0 / 3.0)).epsilon(1e-9));
  CHECK(check_young_pair(YoungFunction::linfinity(), grid).ok);
}

TEST_CASE("delta2") {
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const auto rep = check_delta2(YoungFunction::power(p), 1e-3, 1e3, 200);
    REQUIRE(rep.delta2_constant.has_value());
    CHECK(*rep.delta2_constant == doctest::Approx(std::pow(2.0, p)).epsilon(1e-9));
    CHECK(rep.samples == 200);
  }
  CHECK_FALSE(check_delta2(YoungFunction::linfinity(), 1e-3, 1e3, 200).delta2_constant.has_value());
  CHECK_THROWS_AS(check_delta2(YoungFunction::power(2), 1.0, 10.0, 200), std::invalid_argument);
  CHECK_THROWS_AS(check_delta2(YoungFunction::power(2), 1e-3, 1e3, 50), std::invalid_argument);
}

TEST_CASE("nabla2") {
  const std::vector<double> cs{1.1, 1.2, 1.26, 1.5, 2.0, 3.0, 4.0};
  const auto p2 = check_nabla2(YoungFunction::power(2), 1e-3, 1e3, 200, cs);
  REQUIRE(p2.nabla2_constant.has_value());
  CHECK(*p2.nabla2_constant <= 2.0);
  CHECK_FALSE(check_nabla2(YoungFunction::power(1), 1e-3, 1e3, 200, cs).nabla2_constant.has_value());
  const auto p4 = check_nabla2(YoungFunction::power(4), 1e-3, 1e3, 200, cs);
  REQUIRE(p4.nabla2_constant.has_value());
  CHECK(*p4.nabla2_constant == doctest::Approx(std::cbrt(2.0)).epsilon(1e-2));
}

}  // TEST_SUITE
