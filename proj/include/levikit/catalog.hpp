#pragma once

// Built-in domains, map families and generators, plus a small text format for
// custom ones and `builtin:` reference resolution.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "levikit/expr.hpp"
#include "levikit/maps.hpp"

namespace levikit::catalog {

/// rho(F(z)) * denominator = factor * rho(z) for a map family.
struct Identity {
  Expr denominator;
  Expr factor;
};

// Circular domain in C^n (n >= 3) with a non-compact disc subgroup.
DomainSpec theorem1_domain(int n = 3);
HoloMap theorem1_subgroup();
Identity theorem1_identity();

struct LinearGenerators {
  HoloMap swap;          // z2 <-> z3
  HoloMap sign;          // z3 -> -z3
  TorusAction circles;   // weights (1,0,0) and (0,1,1)
};
LinearGenerators theorem1_linear_generators();

// Bounded non-pseudoconvex domain in C^2, its real subgroup, the transform to
// the unbounded model and the model itself.
DomainSpec theorem2_domain();
HoloMap theorem2_subgroup();
Identity theorem2_identity();
HoloMap theorem2_retraction();  // (z1, tau z2), tau in [0, 1]
DomainSpec theorem2_unbounded();
HoloMap cayley_transform();

/// The sum |z1|^2 + |z2|^4 and the non-negative third term of the bounded
/// Theorem 2 function, evaluated separately.
Expr theorem2_third_term();

struct RemarkFamily {
  DomainSpec domain;
  bool non_plurisubharmonic = false;  // d^2 P / dz2 dz2bar < 0 somewhere on |z2| = 1
  double min_levi = 0.0;              // smallest sampled value of that derivative
};

/// Re z1 + c |z2|^(2m) + Q(z2). Q must use only z2 and be real, homogeneous of
/// degree 2m and non-negative on the unit circle.
RemarkFamily remark_family(int m, const Expr& Q, double c = 1.0);

/// 2 (z2^m - 3/2 |z2|^m + conj(z2)^m)^2
Expr remark_default_q(int m);

/// (z1, z2) -> ((z1 + 1)/(z1 - 1), scale z2 / (z1 - 1)^(1/m)), poscut branch.
HoloMap remark_transform(int m, double scale);

/// Pullback |z1 - 1|^2 * rho_model(transform(z)); a bounded-side realization of
/// the unbounded model, anchored at the origin.
DomainSpec remark_pullback(const DomainSpec& model, const HoloMap& transform);

/// |z1|^2 + |z2|^(2 alpha) - 1
DomainSpec ellipsoid(double alpha);
DomainSpec unit_ball(int n);
HoloMap identity_map(int n);

using Definition = std::variant<DomainSpec, HoloMap>;

/// Parses the text format:
///
///   domain NAME            map NAME
///   dim N                  dim N [-> M]
///   rho EXPR               param NAME disc R | interval LO HI | closed LO HI | real
///   anchor (c1, ..., cn)   component EXPR      (one per output coordinate)
///   margin X               provenance TEXT
///   exceptional (..)
///   provenance TEXT
///
/// '#' starts a comment. Each definition is validated.
std::vector<Definition> parse_definitions(std::string_view text);

/// "(c1, ..., cn)" with constant coordinates such as 1, -3/4, 0.5+2i, 2^(1/2,principal).
Point parse_point(std::string_view text);

/// builtin:NAME[?key=value&...], or PATH[#NAME] of a definitions file.
DomainSpec resolve_domain(std::string_view ref);
HoloMap resolve_map(std::string_view ref);

std::vector<std::string> builtin_domain_names();
std::vector<std::string> builtin_map_names();

}  // namespace levikit::catalog
