#pragma once

// Holomorphic map families, torus actions, and pointwise checks that they
// preserve a domain.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levikit/expr.hpp"
#include "levikit/sampling.hpp"

namespace levikit {

struct ParamDecl {
  enum class Kind { disc, interval, closed, real };
  std::string name;
  Kind kind = Kind::real;
  double lo = 0.0;  // interval: open (lo, hi); closed: [lo, hi]; disc: radius in hi
  double hi = 1.0;

  bool contains(cplx value) const;
  cplx sample(Rng& rng) const;
  std::string describe() const;
};

struct HoloMap {
  std::string name;
  int n_in = 0;
  int n_out = 0;
  std::vector<Expr> components;
  std::vector<ParamDecl> params;
  std::string provenance;
};

/// Components must be holomorphic in z syntactically: conj, re, im, abs, abs2
/// and real powers may only wrap variable-free subexpressions (parameters).
void validate_map(const HoloMap& m);

void check_params(const HoloMap& m, const ParamValues& values);
ParamValues sample_params(const HoloMap& m, Rng& rng);

/// Componentwise evaluation. Throws on parameters outside their declared
/// range, zero denominators and branch-cut hits.
Point apply(const HoloMap& m, const ParamValues& params, std::span<const cplx> z);

struct TorusAction {
  int n = 0;
  std::vector<std::vector<int>> weights;  // one weight vector per circle factor
};

void validate_action(const TorusAction& a);

/// z_j -> exp(i * sum_f weights[f][j] * angles[f]) z_j
Point act(const TorusAction& a, std::span<const double> angles, std::span<const cplx> z);

struct SampleOptions {
  int samples = 10000;
  std::uint64_t seed = 42;
  std::string stream = "samples";
  bool interior = true;
  bool boundary = true;
};

struct DomainSample {
  Point boundary;
  Point interior;  // anchor + u * (boundary - anchor), u uniform in (0, 1)
};

DomainSample sample_domain(const DomainSpec& d, Rng& rng);

struct ResidualSummary {
  int points = 0;
  double max_residual = 0.0;
  Point witness;
  ParamValues witness_params;
};

/// Checks rho(F(z)) * denominator(z) = factor(z) * rho(z) pointwise, with
/// parameters drawn from their ranges unless `fixed` is given. The residual is
/// |lhs - rhs| / max(1, |lhs|, |rhs|). Throws if factor is not positive at a
/// sample.
ResidualSummary verify_invariance_identity(const DomainSpec& d, const HoloMap& m,
                                           const Expr& denominator, const Expr& factor,
                                           const SampleOptions& opts,
                                           const std::optional<ParamValues>& fixed = std::nullopt);

struct PreservationSummary {
  int interior_samples = 0;
  int interior_violations = 0;
  double max_interior_value = -std::numeric_limits<double>::infinity();
  Point interior_witness;
  int boundary_samples = 0;
  int boundary_violations = 0;
  double max_boundary_residual = 0.0;
  Point boundary_witness;
  int undefined = 0;
  Point undefined_witness;
};

/// Interior samples of src must land in {rho_dst < interior_tol}; boundary
/// samples must satisfy |rho_dst(F(z))| <= boundary_tol.
PreservationSummary verify_boundary_preservation(const DomainSpec& src, const DomainSpec& dst,
                                                 const HoloMap& m, const ParamValues& params,
                                                 const SampleOptions& opts,
                                                 double interior_tol = 1e-9,
                                                 double boundary_tol = 1e-8);

/// Residual |rho(g z) - rho(z)| / max(1, |rho(z)|) for random angles.
ResidualSummary verify_torus_invariance(const DomainSpec& d, const TorusAction& a,
                                        const SampleOptions& opts);

struct LinearCheck {
  bool invariant = false;
  double max_residual = 0.0;
  Point witness;
};

LinearCheck verify_discrete_linear(const DomainSpec& d, const HoloMap& m, const SampleOptions& opts,
                                   double tol = 1e-12);

struct ContinuitySummary {
  int paths = 0;
  long steps = 0;
  double max_jump = 0.0;
  Point witness;
};

/// Follows one map component along random segments of the closed unit disc in
/// the variable `path_variable` (other coordinates fixed at `base`). A step's
/// jump is how far |f(z') - f(z)| exceeds 2 max(|f'(z)|, |f'(z')|) |z' - z|;
/// steps are kept below a tenth of the local scale |f| / |f'|, so a branch-cut
/// crossing shows up as an O(|f|) jump and a continuous branch gives 0.
ContinuitySummary verify_branch_continuity(const HoloMap& m, const ParamValues& params,
                                           int component, int path_variable, const Point& base,
                                           int paths, std::uint64_t seed,
                                           const std::string& stream = "branch_paths");

}  // namespace levikit
