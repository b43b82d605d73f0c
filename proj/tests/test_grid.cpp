#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "maxlab/field_io.hpp"
#include "maxlab/grid.hpp"
#include "maxlab/rng.hpp"
#include "maxlab/young.hpp"

using namespace maxlab;

namespace {

GridPtr line(double lo, double hi, int n) { return make_grid(GroupSpec::euclidean(1), {lo}, {hi}, {n}); }

SampledField noise(const GridPtr& g, std::uint64_t seed) {
  CounterRng rng(seed, "grid-test");
  std::vector<double> v(g->node_count());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return SampledField(g, v);
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("layout") {
  const auto g = make_grid(GroupSpec::euclidean(2), {0.0, -1.0}, {1.0, 1.0}, {5, 3});
  CHECK(g->node_count() == 15);
  CHECK(g->cell_volume() == doctest::Approx(0.25 * 1.0).epsilon(1e-12));
  CHECK(g->box_volume() == doctest::Approx(2.0));
  CHECK(g->box_measure() == doctest::Approx(15 * 0.25));
  double x[2];
  g->node_coords(4, x);  // axis 0 slowest: node 4 = (1, 1)
  CHECK(x[0] == 0.25);
  CHECK(x[1] == 0.0);
  g->node_coords(14, x);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 1.0);
  CHECK_THROWS_AS(make_grid(GroupSpec::euclidean(1), {0.0}, {1.0}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(GroupSpec::euclidean(1), {1.0}, {0.0}, {5}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(GroupSpec::euclidean(2), {0.0}, {1.0}, {5}), std::invalid_argument);
}

TEST_CASE("sampling") {
  const auto g = line(-2, 2, 5);
  const auto zero = sample([](auto) { return 0.0; }, g);
  for (double v : zero.values()) CHECK(v == 0.0);
  const auto chi = indicator(mask_from_ball(Ball({0.0}, 1.0), g));
  const std::vector<double> want{0, 0, 1, 0, 0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(chi[i] == want[i]);
  CHECK_THROWS_AS(sample([](auto x) { return 1.0 / x[0]; }, g), std::domain_error);
  CHECK_THROWS_AS(SampledField(g, {1.0, 2.0}), std::invalid_argument);

  const auto h = make_grid(GroupSpec::heisenberg1(), {-1, -1, -1}, {1, 1, 1}, {5, 5, 5});
  const auto rho = sample([&](std::span<const double> x) { return hom_norm(GroupPoint({x[0], x[1], x[2]}), h->group()); }, h);
  for (std::size_t i = 0; i < h->node_count(); ++i) CHECK(rho[i] == hom_norm(h->node(i), h->group()));
}

TEST_CASE("ball masks") {
  const auto g = line(-2, 2, 4001);
  CHECK(mask_from_ball(Ball({10.0}, 1.0), g).measure() == 0.0);
  CHECK(mask_from_ball(Ball({10.0}, 1.0), g).empty());
  CHECK(std::abs(mask_from_ball(Ball({0.0}, 1.0), g).measure() - 2.0) <= 2.0 * g->cell_volume());
  const auto whole = mask_from_ball(Ball({0.0}, 100.0), g);
  CHECK(whole.measure() == doctest::Approx(g->box_measure()).epsilon(1e-12));
  CHECK(whole.measure() == doctest::Approx(static_cast<double>(whole.count()) * g->cell_volume()).epsilon(1e-12));
}

TEST_CASE("mask measure converges under refinement") {
  const auto e2 = GroupSpec::euclidean(2);
  const Ball b({0.1, -0.2}, 0.7);
  const auto coarse = make_grid(e2, {-1, -1}, {1, 1}, {81, 81});
  const auto fine = make_grid(e2, {-1, -1}, {1, 1}, {161, 161});
  const double layer = 2.0 * M_PI * b.radius() * coarse->spacing(0);
  CHECK(std::abs(mask_from_ball(b, coarse).measure() - mask_from_ball(b, fine).measure()) <= 4.0 * layer);
  const auto c1 = line(-1, 1, 101), f1 = line(-1, 1, 201);
  CHECK(std::abs(mask_from_ball(Ball({0.013}, 0.5), c1).measure() - mask_from_ball(Ball({0.013}, 0.5), f1).measure()) <=
        4.0 * c1->cell_volume());
}

TEST_CASE("integration and averages") {
  const auto g = line(0, 1, 2001);
  const auto whole = RegionMask::whole(g);
  CHECK(integrate(SampledField::constant(g, 1.0), whole) == doctest::Approx(g->box_measure()));
  CHECK(integrate(SampledField::constant(g, 0.0), whole) == 0.0);
  CHECK(std::abs(integrate(sample([](auto x) { return x[0]; }, g), whole) - 0.5) <= 1e-3);

  CHECK(average_over(SampledField::constant(g, 3.5), whole) == doctest::Approx(3.5));
  const auto sym = line(-1, 1, 2001);
  const auto pm = sample([](auto x) { return x[0] < 0 ? -1.0 : 1.0; }, sym);
  CHECK(std::abs(average_over(pm, RegionMask::whole(sym))) <= 2.0 * sym->cell_volume());
  const auto d = mask_from_ball(Ball({0.3}, 0.2), g);
  CHECK(average_over(indicator(d), d) == 1.0);
  CHECK_THROWS_AS(average_over(SampledField::constant(g, 1.0), mask_from_ball(Ball({9.0}, 0.1), g)), std::domain_error);

  const auto f = noise(g, 1), h = noise(g, 2);
  CHECK(integrate(f + h, whole) == doctest::Approx(integrate(f, whole) + integrate(h, whole)).epsilon(1e-12));
  CHECK(integrate(scale(f, 3.0), whole) == doctest::Approx(3.0 * integrate(f, whole)).epsilon(1e-12));
  const double avg = average_over(f, d);
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (d.contains(i)) {
      lo = std::min(lo, f[i]);
      hi = std::max(hi, f[i]);
    }
  CHECK(avg >= lo);
  CHECK(avg <= hi);
  CHECK_THROWS_AS(integrate(f, RegionMask::whole(line(0, 1, 11))), std::invalid_argument);
}

TEST_CASE("distribution function") {
  const auto g = line(-1, 1, 401);
  const auto whole = RegionMask::whole(g);
  const auto e = mask_from_ball(Ball({0.2}, 0.3), g);
  const auto d = mask_from_ball(Ball({0.0}, 0.4), g);
  const auto chi = indicator(e);
  std::size_t both = 0;
  for (std::size_t i = 0; i < g->node_count(); ++i) both += (e.contains(i) && d.contains(i)) ? 1 : 0;
  CHECK(distribution_function(chi, d, 0.5) == doctest::Approx(static_cast<double>(both) * g->cell_volume()));
  const auto f = noise(g, 3);
  CHECK(distribution_function(f, whole, max_abs_over(f, whole)) == 0.0);
  CHECK(distribution_function(chi, whole, 0.0) == doctest::Approx(e.measure()));
  double prev = kInf;
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    const double m = distribution_function(f, whole, t);
    CHECK(m <= prev);
    prev = m;
  }
}

TEST_CASE("combinators") {
  const auto g = line(-1, 1, 101);
  const auto five = SampledField::constant(g, 5.0), m3 = SampledField::constant(g, -3.0);
  const auto n5 = negative_part(five), n3 = negative_part(m3);
  for (double v : n5.values()) CHECK(v == 0.0);
  for (double v : n3.values()) CHECK(v == 3.0);
  const auto b = noise(g, 4);
  const auto bp = positive_part(b), bm = negative_part(b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(bp[i] - bm[i] == b[i]);
    CHECK(bp[i] >= 0.0);
    CHECK(bm[i] >= 0.0);
    CHECK(bp[i] * bm[i] == 0.0);
  }
  const auto s = combine(b, b, OpScale{2.0});
  CHECK(s[7] == 2.0 * b[7]);
  CHECK(combine(b, b, OpAbs{})[3] == std::abs(b[3]));
  CHECK_THROWS_AS(b + SampledField::constant(line(-1, 1, 11), 1.0), std::invalid_argument);
}

TEST_CASE("field csv round trip") {
  const auto g = make_grid(GroupSpec::heisenberg1(), {-1, -1, -2}, {1, 1, 2}, {4, 5, 3});
  const auto f = noise(g, 9);
  std::stringstream ss;
  write_field_csv(ss, f);
  const auto back = read_field_csv(ss, "mem");
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
  CHECK(back.grid().same_layout(*g));
  std::stringstream again;
  write_field_csv(again, back);
  std::stringstream first;
  write_field_csv(first, f);
  CHECK(again.str() == first.str());
}

TEST_CASE("field csv errors name the line") {
  const auto g = line(0, 1, 3);
  std::stringstream ss;
  write_field_csv(ss, SampledField::constant(g, 1.0));
  std::string text = ss.str();
  const auto pos = text.rfind("1\n");
  text.replace(pos, 1, "nan");
  std::stringstream bad(text);
  try {
    (void)read_field_csv(bad, "bad.csv");
    FAIL("expected an error");
  } catch (const FieldIoError& e) {
    CHECK(e.file() == "bad.csv");
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("bad.csv:5") != std::string::npos);
  }
  std::stringstream shortfile("# maxlab-grid " + g->descriptor() + "\nx0,value\n0,1\n");
  CHECK_THROWS_AS((void)read_field_csv(shortfile, "short.csv"), FieldIoError);
  std::stringstream other(ss.str());
  CHECK_THROWS_AS((void)read_field_csv(other, "other.csv", line(0, 2, 3)), FieldIoError);
}

}  // TEST_SUITE
