#include <cmath>
#include <numbers>

#include "doctest.h"
#include "levikit/catalog.hpp"
#include "levikit/levi.hpp"
#include "levikit/maps.hpp"
#include "support.hpp"

using namespace levikit;
using levikit::testing::distance;
using levikit::testing::fd_wirtinger;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

HoloMap single(std::string_view component, int n, std::vector<ParamDecl> params = {}) {
  HoloMap m;
  m.name = "probe";
  m.n_in = n;
  m.n_out = 1;
  m.components = {parse(component, n, true)};
  m.params = std::move(params);
  return m;
}

}  // namespace

TEST_SUITE("maps") {

TEST_CASE("parameter declarations") {
  const ParamDecl disc{"a", ParamDecl::Kind::disc, 0.0, 1.0};
  const ParamDecl open{"a", ParamDecl::Kind::interval, -1.0, 1.0};
  const ParamDecl closed{"tau", ParamDecl::Kind::closed, 0.0, 1.0};
  const ParamDecl real{"r", ParamDecl::Kind::real, 0.0, 0.0};
  CHECK(disc.contains(cplx{0.6, 0.7}));
  CHECK_FALSE(disc.contains(cplx{0.8, 0.6}));
  CHECK(open.contains(0.99));
  CHECK_FALSE(open.contains(1.0));
  CHECK_FALSE(open.contains(cplx{0.0, 0.1}));
  CHECK(closed.contains(0.0));
  CHECK(closed.contains(1.0));
  CHECK_FALSE(closed.contains(1.0 + 1e-12));
  CHECK(real.contains(-1e9));
  CHECK_FALSE(real.contains(cplx{0.0, 1.0}));
  CHECK(closed.describe() == "tau in [0, 1]");
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = make_stream(1, "params", i);
    CHECK(disc.contains(disc.sample(rng)));
    CHECK(open.contains(open.sample(rng)));
    CHECK(closed.contains(closed.sample(rng)));
  }
}

TEST_CASE("validate_map") {
  CHECK_NOTHROW(validate_map(single("conj(a)*z1", 1, {{"a", ParamDecl::Kind::disc, 0.0, 1.0}})));
  CHECK(code_of([] { validate_map(single("conj(z1)", 1)); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { validate_map(single("abs2(z1)", 1)); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { validate_map(single("re(z1) + z2", 2)); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { validate_map(single("z1^{0.5}", 1)); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { validate_map(single("b*z1", 1)); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] {
          validate_map(single("a*z1", 1, {{"a", ParamDecl::Kind::real}, {"a", ParamDecl::Kind::real}}));
        }) == ErrorCode::invalid_argument);
  HoloMap m = single("z1", 1);
  m.n_out = 2;
  CHECK(code_of([&] { validate_map(m); }) == ErrorCode::invalid_argument);
}

TEST_CASE("apply") {
  const HoloMap f = catalog::theorem1_subgroup();
  const Point z{cplx{0.1, 0.2}, cplx{0.3, -0.1}, cplx{-0.2, 0.05}};
  const Point same = apply(f, {{"a", cplx{}}}, z);
  CHECK(distance(same, z) <= 1e-15);
  const cplx a{0.3, -0.4};
  const Point moved = apply(f, {{"a", a}}, Point{a, 0.0, 0.0});
  CHECK(distance(moved, Point{0.0, 0.0, 0.0}) <= 1e-15);
  CHECK(code_of([&] { apply(f, {{"a", cplx{1.0}}}, z); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { apply(f, {}, z); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { apply(f, {{"a", a}}, Point{0.0}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { apply(catalog::cayley_transform(), {}, Point{1.0, 0.0}); }) == ErrorCode::division_by_zero);
}

TEST_CASE("real subgroup composes like the Moebius group") {
  const DomainSpec d = catalog::theorem2_domain();
  const HoloMap f = catalog::theorem2_subgroup();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng = make_stream(2, "group", i);
    const double a = uniform(rng, -0.95, 0.95);
    const double b = uniform(rng, -0.95, 0.95);
    const double c = (a + b) / (1.0 + a * b);
    const Point z = sample_domain(d, rng).interior;
    const Point lhs = apply(f, {{"a", cplx{a}}}, apply(f, {{"a", cplx{b}}}, z));
    const Point rhs = apply(f, {{"a", cplx{c}}}, z);
    worst = std::max(worst, distance(lhs, rhs));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("catalog maps satisfy Cauchy-Riemann") {
  struct Case {
    HoloMap map;
    ParamValues params;
    Point base;
  };
  const auto lin = catalog::theorem1_linear_generators();
  const std::vector<Case> cases = {
      {catalog::theorem1_subgroup(), {{"a", cplx{0.3, 0.4}}}, {cplx{0.1, -0.2}, cplx{0.3, 0.1}, cplx{-0.4, 0.2}}},
      {catalog::theorem2_subgroup(), {{"a", cplx{-0.6}}}, {cplx{0.2, 0.3}, cplx{-0.1, 0.5}}},
      {catalog::cayley_transform(), {}, {cplx{0.2, 0.3}, cplx{-0.1, 0.5}}},
      {catalog::remark_transform(3, 2.0), {}, {cplx{-0.3, 0.2}, cplx{0.4, 0.1}}},
      {lin.swap, {}, {cplx{0.1, 0.2}, cplx{0.3, 0.4}, cplx{0.5, 0.6}}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.map.name);
    for (int comp = 0; comp < c.map.n_out; ++comp) {
      const auto f = [&](const Point& z) { return apply(c.map, c.params, z)[static_cast<std::size_t>(comp)]; };
      for (int j = 0; j < c.map.n_in; ++j) {
        const cplx dbar = fd_wirtinger(f, c.base, j, true);
        const cplx d = fd_wirtinger(f, c.base, j, false);
        CHECK(std::abs(dbar) <= 1e-8 * std::max(1.0, std::abs(d)));
      }
    }
  }
}

TEST_CASE("invariance identities") {
  SampleOptions o;
  o.samples = 2000;
  const auto id1 = catalog::theorem1_identity();
  const auto r1 = verify_invariance_identity(catalog::theorem1_domain(), catalog::theorem1_subgroup(), id1.denominator,
                                             id1.factor, o);
  CHECK(r1.max_residual <= 1e-10);
  CHECK(r1.points > 0);
  const auto id2 = catalog::theorem2_identity();
  const DomainSpec d2 = catalog::theorem2_domain();
  const HoloMap f2 = catalog::theorem2_subgroup();
  CHECK(verify_invariance_identity(d2, f2, id2.denominator, id2.factor, o).max_residual <= 1e-10);

  // A wrong factor is detected.
  const Expr wrong = parse("1 - a^2 + 1/10", 2, true);
  CHECK(verify_invariance_identity(d2, f2, id2.denominator, wrong, o).max_residual > 1e-3);
  const Expr negative = parse("-1 + 0*a", 2, true);
  CHECK(code_of([&] { verify_invariance_identity(d2, f2, id2.denominator, negative, o); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { verify_invariance_identity(catalog::theorem1_domain(), f2, id2.denominator, id2.factor, o); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("subgroup and retraction preserve their domains") {
  SampleOptions o;
  o.samples = 1000;
  const DomainSpec d1 = catalog::theorem1_domain();
  for (cplx a : {cplx{0.5, 0.0}, cplx{-0.2, 0.7}, cplx{0.0, -0.99}}) {
    const auto s = verify_boundary_preservation(d1, d1, catalog::theorem1_subgroup(), {{"a", a}}, o);
    CHECK(s.interior_violations == 0);
    CHECK(s.boundary_violations == 0);
  }
  const DomainSpec d2 = catalog::theorem2_domain();
  const HoloMap r = catalog::theorem2_retraction();
  for (double tau : {0.0, 0.3, 1.0}) {
    o.boundary = tau == 1.0;
    const auto s = verify_boundary_preservation(d2, d2, r, {{"tau", cplx{tau}}}, o);
    CHECK(s.interior_violations == 0);
    CHECK(s.boundary_violations == 0);
  }
  CHECK(code_of([&] { apply(r, {{"tau", cplx{1.5}}}, Point{0.0, 0.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("transform onto the unbounded model") {
  SampleOptions o;
  o.samples = 2000;
  const auto s = verify_boundary_preservation(catalog::theorem2_domain(), catalog::theorem2_unbounded(),
                                              catalog::cayley_transform(), {}, o);
  CHECK(s.interior_violations == 0);
  CHECK(s.max_interior_value < 0.0);
  CHECK(s.boundary_violations == 0);
  CHECK(s.max_boundary_residual <= 1e-8);
  const Point origin_image = apply(catalog::cayley_transform(), {}, Point{0.0, 0.0});
  CHECK(distance(origin_image, Point{-1.0, 0.0}) <= 1e-15);
}

TEST_CASE("branch continuity") {
  const HoloMap cayley = catalog::cayley_transform();
  const auto ok = verify_branch_continuity(cayley, {}, 2, 1, Point{0.0, 1.0}, 100, 42);
  CHECK(ok.paths == 100);
  CHECK(ok.steps > 0);
  CHECK(ok.max_jump <= 1e-6);

  // The principal branch cuts the disc along the real segment, so paths jump.
  HoloMap principal = cayley;
  principal.components[1] = parse("2^(1/2,principal)*z2/(z1 - 1)^(1/2,principal)", 2);
  const auto bad = verify_branch_continuity(principal, {}, 2, 1, Point{0.0, 1.0}, 100, 42);
  CHECK(bad.max_jump > 0.1);
  CHECK_FALSE(bad.witness.empty());

  CHECK(code_of([&] { verify_branch_continuity(cayley, {}, 3, 1, Point{0.0, 1.0}, 10, 1); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([&] { verify_branch_continuity(cayley, {}, 2, 1, Point{0.0}, 10, 1); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("torus actions") {
  const TorusAction t3{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const double angles[] = {std::numbers::pi / 2.0, 0.0, std::numbers::pi};
  const Point z{1.0, 2.0, 3.0};
  const Point g = act(t3, angles, z);
  CHECK(distance(g, Point{cplx{0.0, 1.0}, 2.0, -3.0}) <= 1e-15);

  CHECK(code_of([] { validate_action(TorusAction{2, {}}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { validate_action(TorusAction{2, {{1}}}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { validate_action(TorusAction{2, {{0, 0}}}); }) == ErrorCode::invalid_argument);

  SampleOptions o;
  o.samples = 2000;
  const DomainSpec d = catalog::theorem1_domain();
  const auto gens = catalog::theorem1_linear_generators();
  CHECK(verify_torus_invariance(d, gens.circles, o).max_residual <= 1e-10);
  CHECK(verify_torus_invariance(d, TorusAction{3, {{1, 1, 1}}}, o).max_residual <= 1e-10);
  const auto full = verify_torus_invariance(d, t3, o);
  CHECK(full.max_residual > 0.1);
  CHECK(full.witness.size() == 3);
  CHECK(verify_torus_invariance(catalog::unit_ball(3), t3, o).max_residual <= 1e-12);
}

TEST_CASE("discrete linear generators") {
  SampleOptions o;
  o.samples = 1000;
  const DomainSpec d = catalog::theorem1_domain();
  const auto gens = catalog::theorem1_linear_generators();
  CHECK(verify_discrete_linear(d, gens.swap, o).invariant);
  CHECK(verify_discrete_linear(d, gens.sign, o).invariant);
  HoloMap stretch = gens.swap;
  stretch.components = {parse("z1", 3), parse("2*z2", 3), parse("z3", 3)};
  const auto bad = verify_discrete_linear(d, stretch, o);
  CHECK_FALSE(bad.invariant);
  CHECK(bad.max_residual > 0.1);
  CHECK(code_of([&] { verify_discrete_linear(d, catalog::theorem1_subgroup(), o); }) == ErrorCode::invalid_argument);

  const Point z{cplx{0.1, 0.2}, cplx{0.3, 0.4}, cplx{0.5, 0.6}};
  CHECK(apply(gens.swap, {}, apply(gens.swap, {}, z)) == z);
  CHECK(apply(gens.sign, {}, apply(gens.sign, {}, z)) == z);
}

TEST_CASE("domain samples") {
  const DomainSpec d = catalog::theorem2_domain();
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = make_stream(3, "samples", i);
    const DomainSample s = sample_domain(d, rng);
    CHECK(std::abs(eval(d.rho, s.boundary)) <= 1e-12);
    CHECK(eval(d.rho, s.interior).real() < 0.0);
  }
}

}

TEST_CASE("interior samples lie inside the domain") {
  for (const DomainSpec& d : {catalog::theorem1_domain(), catalog::theorem2_domain()}) {
    int outside = 0;
    for (int i = 0; i < 20000; ++i) {
      Rng rng = make_stream(11, "interior_property", static_cast<std::uint64_t>(i));
      const DomainSample s = sample_domain(d, rng);
      if (!(eval(d.rho, s.interior).real() < 0.0)) ++outside;
    }
    CHECK(outside == 0);
  }
}
