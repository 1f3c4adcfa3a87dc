#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "levikit/catalog.hpp"
#include "levikit/levi.hpp"
#include "levikit/maps.hpp"
#include "support.hpp"

using namespace levikit;
using levikit::testing::distance;

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

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

double rho_at(const DomainSpec& d, const Point& z) { return eval(d.rho, z).real(); }

constexpr std::string_view kDefinitions = R"(# two definitions
domain wedge
dim 2
rho abs2(z1) + abs2(z2)^2 - 1   # an ellipsoid
anchor (0, 0)
margin 1e-3
exceptional (1, 0)
provenance test domain

map shear
dim 2 -> 2
param a disc 1
param tau closed 0 1
component z1
component z2 + tau*a*z1
)";

}  // namespace

TEST_SUITE("catalog") {

TEST_CASE("circular domain examples") {
  const DomainSpec d = catalog::theorem1_domain();
  CHECK(d.name == "thm1");
  CHECK(rho_at(d, {0.0, 0.0, 0.0}) == doctest::Approx(-1.0));
  // (conj(z2) z3 + conj(z3) z2)^2 = 4 at (0, 1, 1), plus |z2|^4 + |z3|^4 = 2.
  CHECK(rho_at(d, {0.0, 1.0, 1.0}) == doctest::Approx(5.0));
  CHECK(rho_at(d, {0.0, 1.0, cplx{0.0, 1.0}}) == doctest::Approx(1.0));
  const DomainSpec d4 = catalog::theorem1_domain(4);
  CHECK(d4.name == "thm1_n4");
  CHECK(std::abs(rho_at(d4, {0.6, 0.8, 0.0, 0.0})) <= 1e-15);
  CHECK(code_of([] { catalog::theorem1_domain(2); }) == ErrorCode::invalid_argument);
  CHECK(catalog::resolve_domain("builtin:thm1?n=5").n == 5);
}

TEST_CASE("bounded non-pseudoconvex domain") {
  const DomainSpec d = catalog::theorem2_domain();
  CHECK(rho_at(d, {0.0, 0.0}) == doctest::Approx(-1.0));
  REQUIRE(d.exceptional_points.size() == 1);
  CHECK(d.exceptional_points[0] == Point{1.0, 0.0});
  // The third term is non-negative wherever it is defined.
  const Expr third = catalog::theorem2_third_term();
  for (std::uint64_t i = 0; i < 2000; ++i) {
    Rng rng = make_stream(4, "third", i);
    const Point z{random_in_disc(rng, 1.5), random_in_disc(rng, 1.5)};
    if (std::abs(z[0] - 1.0) < 1e-9) continue;
    const cplx v = eval(third, z);
    CHECK(v.real() >= -1e-12);
    CHECK(std::abs(v.imag()) <= 1e-12 * (1.0 + v.real()));
  }
  // Bounded: every boundary hit lies in the ball of radius 1 in z1 and 1 in |z2|^2.
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng = make_stream(4, "bounded", i);
    const Point q = locate_boundary(d, random_direction(rng, 2)).point;
    CHECK(std::norm(q[0]) + std::pow(std::norm(q[1]), 2) <= 1.0 + 1e-9);
  }
}

TEST_CASE("unbounded model and transform") {
  const DomainSpec u = catalog::theorem2_unbounded();
  CHECK(std::abs(rho_at(u, {-0.75, 1.0})) <= 1e-15);
  CHECK(rho_at(u, {-1.0, 0.0}) == doctest::Approx(-1.0));
  const HoloMap t = catalog::cayley_transform();
  CHECK(distance(apply(t, {}, Point{0.0, 0.0}), Point{-1.0, 0.0}) <= 1e-15);
  // A boundary point of the bounded domain lands on the model boundary.
  const DomainSpec d = catalog::theorem2_domain();
  const Point q = locate_boundary(d, Point{cplx{-0.6, 0.0}, cplx{0.0, 0.8}}).point;
  CHECK(std::abs(rho_at(u, apply(t, {}, q))) <= 1e-9);
}

TEST_CASE("orbits accumulate at (+-1, 0)") {
  const HoloMap f = catalog::theorem2_subgroup();
  for (double a : {0.9, 0.999, 1.0 - 1e-8}) {
    CHECK(distance(apply(f, {{"a", cplx{a}}}, Point{0.0, 0.0}), Point{-a, 0.0}) <= 1e-15);
    CHECK(distance(apply(f, {{"a", cplx{-a}}}, Point{0.0, 0.0}), Point{a, 0.0}) <= 1e-15);
  }
  const HoloMap g = catalog::theorem1_subgroup();
  const Point image = apply(g, {{"a", cplx{0.0, 1.0 - 1e-8}}}, Point{0.0, 0.0, 0.0});
  CHECK(distance(image, Point{cplx{0.0, -1.0 + 1e-8}, 0.0, 0.0}) <= 1e-15);
}

TEST_CASE("remark family") {
  SUBCASE("m = 2 with c = 1/4 is the unbounded model") {
    const auto fam = catalog::remark_family(2, catalog::remark_default_q(2), 0.25);
    CHECK(fam.non_plurisubharmonic);
    CHECK(fam.min_levi < -0.5);
    const DomainSpec u = catalog::theorem2_unbounded();
    for (std::uint64_t i = 0; i < 500; ++i) {
      Rng rng = make_stream(6, "remark", i);
      const Point z{random_in_disc(rng, 3.0), random_in_disc(rng, 3.0)};
      CHECK(rho_at(fam.domain, z) == doctest::Approx(rho_at(u, z)).epsilon(1e-12));
    }
  }
  SUBCASE("Q = 0 gives a plurisubharmonic model") {
    for (int m : {1, 2, 5}) {
      const auto fam = catalog::remark_family(m, Expr{}, 1.0);
      CHECK_FALSE(fam.non_plurisubharmonic);
      CHECK(fam.min_levi == doctest::Approx(m * m));
    }
  }
  SUBCASE("the default Q is non-negative and breaks plurisubharmonicity") {
    for (int m : {1, 2, 3, 4}) {
      CAPTURE(m);
      CHECK(catalog::remark_family(m, catalog::remark_default_q(m), 0.25).non_plurisubharmonic);
    }
  }
  SUBCASE("invalid Q") {
    CHECK(code_of([] { catalog::remark_family(2, parse("-abs2(z2)^2", 2), 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { catalog::remark_family(2, parse("abs2(z2)", 2), 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { catalog::remark_family(2, parse("z2^4", 2), 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { catalog::remark_family(2, parse("abs2(z1)^2", 2), 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { catalog::remark_family(0, Expr{}, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { catalog::remark_family(2, Expr{}, -1.0); }) == ErrorCode::invalid_argument);
  }
}

TEST_CASE("pullback with scale sqrt(2) reproduces the bounded domain") {
  const DomainSpec pulled = catalog::resolve_domain("builtin:remark5_pullback?m=2");
  const DomainSpec d = catalog::theorem2_domain();
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = make_stream(8, "pullback", i);
    const Point z{random_in_disc(rng, 1.2), random_in_disc(rng, 1.2)};
    if (std::abs(z[0] - 1.0) < 1e-3) continue;
    CHECK(rho_at(pulled, z) == doctest::Approx(rho_at(d, z)).epsilon(1e-10).scale(1.0));
  }
  // A different scale gives a different domain.
  const DomainSpec other = catalog::resolve_domain("builtin:remark5_pullback?m=2&scale=1");
  CHECK(std::abs(rho_at(other, {0.0, 0.5}) - rho_at(d, {0.0, 0.5})) > 1e-3);
}

TEST_CASE("generalized transform maps onto its model") {
  for (int m : {1, 3}) {
    CAPTURE(m);
    const DomainSpec model = catalog::remark_family(m, catalog::remark_default_q(m), 0.25).domain;
    const HoloMap t = catalog::remark_transform(m, 2.0);
    const DomainSpec pulled = catalog::remark_pullback(model, t);
    SampleOptions o;
    o.samples = 500;
    const auto s = verify_boundary_preservation(pulled, model, t, {}, o);
    CHECK(s.interior_violations == 0);
    CHECK(s.boundary_violations == 0);
  }
  CHECK(code_of([] { catalog::remark_transform(2, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { catalog::remark_pullback(catalog::unit_ball(3), catalog::cayley_transform()); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("ellipsoids") {
  const DomainSpec e2 = catalog::ellipsoid(2.0);
  CHECK(rho_at(e2, {0.0, std::pow(2.0, -0.25)}) == doctest::Approx(-0.5));
  CHECK(e2.rho.arg(0).arg(1).op() == Op::ipow);
  const DomainSpec e15 = catalog::ellipsoid(1.5);
  CHECK(e15.rho.arg(0).arg(1).op() == Op::rpow);
  CHECK(std::abs(rho_at(e15, {0.0, 1.0})) <= 1e-15);
  const DomainSpec e1 = catalog::ellipsoid(1.0);
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng = make_stream(2, "ball", i);
    const Point z{random_in_disc(rng, 1.0), random_in_disc(rng, 1.0)};
    CHECK(rho_at(e1, z) == doctest::Approx(rho_at(catalog::unit_ball(2), z)));
  }
  CHECK(code_of([] { catalog::ellipsoid(0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { catalog::ellipsoid(-1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("builtin references") {
  for (const char* ref : {"builtin:thm1", "builtin:thm1_n4", "builtin:thm2", "builtin:thm2_unbounded",
                          "builtin:ellipsoid?alpha=3", "builtin:ball?n=4", "builtin:remark5?m=3&c=1&q=zero",
                          "builtin:remark5_pullback?m=3&scale=2"}) {
    CAPTURE(ref);
    const DomainSpec d = catalog::resolve_domain(ref);
    CHECK(rho_at(d, d.anchor) < 0.0);
  }
  for (const char* ref : {"builtin:thm1_subgroup", "builtin:thm1_swap", "builtin:thm1_sign", "builtin:thm2_subgroup",
                          "builtin:thm2_retraction", "builtin:cayley", "builtin:remark5_transform?m=3",
                          "builtin:identity?n=3"}) {
    CAPTURE(ref);
    CHECK_NOTHROW(validate_map(catalog::resolve_map(ref)));
  }
  CHECK(catalog::resolve_domain("builtin:remark5").name == "remark5_m2");
  CHECK(code_of([] { catalog::resolve_domain("builtin:nonesuch"); }) == ErrorCode::not_found);
  CHECK(code_of([] { catalog::resolve_map("builtin:nonesuch"); }) == ErrorCode::not_found);
  CHECK(code_of([] { catalog::resolve_domain("builtin:thm2?alpha=2"); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { catalog::resolve_domain("builtin:ellipsoid?alpha=two"); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { catalog::resolve_domain("builtin:remark5?q=other"); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { catalog::resolve_domain("/nonexistent/defs.txt"); }) == ErrorCode::not_found);
  CHECK(catalog::builtin_domain_names().size() == 8);
  CHECK(catalog::builtin_map_names().size() == 8);
}

TEST_CASE("definitions text") {
  const auto defs = catalog::parse_definitions(kDefinitions);
  REQUIRE(defs.size() == 2);
  const auto& d = std::get<DomainSpec>(defs[0]);
  CHECK(d.name == "wedge");
  CHECK(d.n == 2);
  CHECK(d.interior_margin == 1e-3);
  CHECK(d.exceptional_points.size() == 1);
  CHECK(d.provenance == "test domain");
  CHECK(print(d.rho) == "abs2(z1) + abs2(z2)^2 - 1");
  const auto& m = std::get<HoloMap>(defs[1]);
  CHECK(m.n_in == 2);
  CHECK(m.n_out == 2);
  REQUIRE(m.params.size() == 2);
  CHECK(m.params[1].kind == ParamDecl::Kind::closed);
  CHECK(apply(m, {{"a", cplx{0.5}}, {"tau", cplx{1.0}}}, Point{2.0, 1.0}) == Point{2.0, 2.0});

  const auto path = std::filesystem::temp_directory_path() / "levikit_catalog_test.txt";
  {
    std::ofstream out(path);
    out << kDefinitions;
  }
  CHECK(catalog::resolve_domain(path.string()).name == "wedge");
  CHECK(catalog::resolve_domain(path.string() + "#wedge").n == 2);
  CHECK(catalog::resolve_map(path.string() + "#shear").name == "shear");
  CHECK(code_of([&] { catalog::resolve_domain(path.string() + "#shear"); }) == ErrorCode::not_found);
  std::filesystem::remove(path);
}

TEST_CASE("definitions text errors") {
  CHECK(message_of([] { catalog::parse_definitions("dim 2\n"); }).find("line 1") != std::string::npos);
  CHECK(message_of([] { catalog::parse_definitions("domain x\ndim 2\nrho abs2(z1) + abs2(z3) - 1\n"); })
            .find("line 1") != std::string::npos);
  CHECK(code_of([] { catalog::parse_definitions("domain x\ndim two\n"); }) == ErrorCode::parse);
  CHECK(code_of([] { catalog::parse_definitions("domain x\ndim 2\n"); }) == ErrorCode::parse);
  CHECK(code_of([] { catalog::parse_definitions("domain x\ndim 2 -> 2\n"); }) == ErrorCode::parse);
  CHECK(code_of([] { catalog::parse_definitions("domain x\ndim 1\nrho abs2(z1) - 1\nfoo bar\n"); }) ==
        ErrorCode::parse);
  CHECK(message_of([] { catalog::parse_definitions("domain x\ndim 1\nrho abs2(z1) - 1\nfoo bar\n"); })
            .find("line 4") != std::string::npos);
  CHECK(code_of([] { catalog::parse_definitions("domain x\ndim 1\nrho abs2(z1) - 1\nanchor (2)\n"); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { catalog::parse_definitions("map f\ndim 1\nparam a wedge 1\ncomponent z1\n"); }) ==
        ErrorCode::parse);
  CHECK(code_of([] { catalog::parse_definitions("map f\ndim 1\nparam a closed 1 0\ncomponent z1\n"); }) ==
        ErrorCode::parse);
  CHECK(code_of([] { catalog::parse_definitions("map f\ndim 1 -> 2\ncomponent z1\n"); }) == ErrorCode::parse);
  CHECK(code_of([] { catalog::parse_definitions("map f\ndim 1\ncomponent conj(z1)\n"); }) ==
        ErrorCode::invalid_argument);
  CHECK(catalog::parse_definitions("# only a comment\n\n").empty());
}

TEST_CASE("parse_point") {
  const Point p = catalog::parse_point("(1, -3/4, 0.5+2i, 2^(1/2,principal))");
  REQUIRE(p.size() == 4);
  CHECK(p[0] == cplx{1.0});
  CHECK(p[1] == cplx{-0.75});
  CHECK(p[2] == cplx{0.5, 2.0});
  CHECK(p[3].real() == doctest::Approx(std::numbers::sqrt2));
  CHECK_THROWS_AS(catalog::parse_point("(f(1), 2)"), ParseError);
  CHECK_THROWS_AS(catalog::parse_point("(z1, 2)"), ParseError);
  CHECK(code_of([] { catalog::parse_point("(1,, 2)"); }) == ErrorCode::parse);
}

}
