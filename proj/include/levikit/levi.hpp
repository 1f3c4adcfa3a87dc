#pragma once

// Boundary location and Levi forms of domains {rho < 0}.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levikit/expr.hpp"

namespace levikit {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct BoundaryOptions {
  double t_start = 1.0 / 64.0;
  double t_max = 1e6;
  int max_bisection = 200;
  double residual_tol = 1e-12;
  int sweep = 64;  // grid points checked below the first outside point
};

struct BoundaryHit {
  Point point;
  double t = 0.0;
  double residual = 0.0;
};

/// First crossing of {rho = 0} along origin + t*direction, t > 0: t doubles
/// until rho > 0, a uniform grid of `sweep` points below that t picks the
/// first sign change, and bisection refines it. Crossings closer together than
/// the grid spacing can be missed. Requires rho(origin) < 0.
BoundaryHit locate_boundary(const Expr& rho, std::span<const cplx> origin,
                            std::span<const cplx> direction, const BoundaryOptions& opts = {});

inline BoundaryHit locate_boundary(const DomainSpec& d, std::span<const cplx> direction,
                                   const BoundaryOptions& opts = {}) {
  return locate_boundary(d.rho, d.anchor, direction, opts);
}

/// How the complex tangent space is coordinatized.
///  orthonormal: orthonormal basis of {w : sum_j grad_j w_j = 0}; drop the
///               coordinate vector most aligned with conj(grad) and run
///               Gram-Schmidt on the rest.
///  graph:       basis e_a - (grad_a / grad_m) e_m, a != m, i.e. the tangent
///               space parametrized by all coordinates except the pivot m.
enum class LeviChart { orthonormal, graph };

struct LeviOptions {
  double rank_tol = 1e-8;       // relative to max(1, spectral norm)
  double grad_tol = 1e-10;
  double residual_tol = 1e-10;  // |rho(q)| allowed for a boundary point
  LeviChart chart = LeviChart::orthonormal;
  int pivot = 0;                // 1-based; 0 picks the most aligned coordinate
  double exceptional_radius = 1e-3;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct LeviReport {
  Point point;
  double residual = 0.0;
  CVector grad;
  double grad_norm = 0.0;
  CMatrix hessian;  // H_jk = d^2 rho / dz_j dconj(z_k)
  std::vector<CVector> tangent_basis;
  CMatrix restricted_form;
  std::vector<double> eigenvalues;  // ascending
  int rank = 0;
  Signature signature;
  LeviChart chart = LeviChart::orthonormal;
  int pivot = 0;  // coordinate dropped from (orthonormal) or solved for (graph)
  bool near_exceptional = false;
};

struct Spectrum {
  std::vector<double> eigenvalues;
  int rank = 0;
  Signature signature;
};

/// Eigenvalues (ascending), rank and signature of a Hermitian matrix.
Spectrum classify_hermitian(const CMatrix& form, double rank_tol);

/// Orthonormal basis of {w : sum_j grad_j w_j = 0}; `dropped` receives the
/// 1-based coordinate left out of the Gram-Schmidt start set.
std::vector<CVector> orthonormal_tangent_basis(const CVector& grad, int* dropped = nullptr);

/// Symbolic gradient and complex Hessian of a domain's defining function,
/// built once and evaluated at many points.
class LeviModel {
 public:
  explicit LeviModel(DomainSpec domain);

  const DomainSpec& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return domain_.n; }

  double value(std::span<const cplx> z) const;
  CVector gradient(std::span<const cplx> z) const;
  CMatrix hessian(std::span<const cplx> z) const;
  const Expr& gradient_expr(int j) const { return grad_.at(static_cast<std::size_t>(j - 1)); }

  /// Throws Error(degenerate_gradient) where the boundary is not smooth and
  /// Error(invalid_argument) when q is not on the boundary.
  LeviReport report(std::span<const cplx> q, const LeviOptions& opts = {}) const;

  bool near_exceptional(std::span<const cplx> q, double radius) const;

 private:
  DomainSpec domain_;
  std::vector<Expr> grad_;
  std::vector<Expr> hess_;  // row-major n x n
};

inline LeviReport levi_report(const DomainSpec& d, std::span<const cplx> q,
                              const LeviOptions& opts = {}) {
  return LeviModel(d).report(q, opts);
}

struct ScanOptions {
  LeviOptions levi;
  /// When set, directions are drawn around the ray from the anchor through
  /// this point instead of uniformly.
  std::optional<Point> focus;
  double focus_spread = 0.05;
  std::string stream = "levi_scan";
  bool keep_samples = true;
};

struct ScanSample {
  Point point;
  int rank = 0;
  std::vector<double> eigenvalues;
};

struct ScanSummary {
  int requested = 0;
  int evaluated = 0;
  int skipped = 0;  // degenerate gradient
  int near_exceptional = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  Point min_witness;
  Point max_witness;
  std::map<int, int> rank_counts;
  std::vector<ScanSample> samples;  // evaluated samples in index order
};

/// Levi forms at boundary points hit by `samples` random rays from the anchor.
/// Throws if every sample is degenerate.
ScanSummary pseudoconvexity_scan(const LeviModel& model, int samples, std::uint64_t seed,
                                 const ScanOptions& opts = {});

}  // namespace levikit
