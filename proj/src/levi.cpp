#include "levikit/levi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "levikit/sampling.hpp"

namespace levikit {

namespace {

double real_value(const Expr& rho, std::span<const cplx> z) {
  const double v = eval(rho, z).real();
  if (!std::isfinite(v)) throw Error(ErrorCode::no_boundary, "non-finite defining function value");
  return v;
}

Point along(std::span<const cplx> origin, std::span<const cplx> dir, double t) {
  Point p(origin.begin(), origin.end());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * dir[i];
  return p;
}

}  // namespace

BoundaryHit locate_boundary(const Expr& rho, std::span<const cplx> origin,
                            std::span<const cplx> direction, const BoundaryOptions& opts) {
  if (origin.size() != direction.size()) {
    throw Error(ErrorCode::invalid_argument, "direction dimension mismatch");
  }
  double norm2 = 0.0;
  for (const auto& c : direction) norm2 += std::norm(c);
  if (norm2 == 0.0) throw Error(ErrorCode::invalid_argument, "zero direction");
  Point dir(direction.begin(), direction.end());
  for (auto& c : dir) c /= std::sqrt(norm2);

  const double f0 = real_value(rho, origin);
  if (!(f0 < 0.0)) throw Error(ErrorCode::invalid_argument, "ray origin is not interior");

  double lo = 0.0;
  double f_lo = f0;
  double hi = opts.t_start;
  double f_hi = real_value(rho, along(origin, dir, hi));
  while (f_hi <= 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    if (hi > opts.t_max) throw Error(ErrorCode::no_boundary, "ray does not leave the domain");
    f_hi = real_value(rho, along(origin, dir, hi));
  }

  // The doubling steps can jump over an exit and re-entry; look for the first
  // positive value on a uniform grid below hi.
  double prev_t = 0.0;
  double prev_f = f0;
  for (int k = 1; k < opts.sweep; ++k) {
    const double t = hi * k / opts.sweep;
    const double ft = real_value(rho, along(origin, dir, t));
    if (ft > 0.0) {
      lo = prev_t;
      f_lo = prev_f;
      hi = t;
      f_hi = ft;
      break;
    }
    prev_t = t;
    prev_f = ft;
  }
  if (prev_t > lo && prev_f <= 0.0 && hi > prev_t) {
    lo = prev_t;
    f_lo = prev_f;
  }

  for (int step = 0; step < opts.max_bisection; ++step) {
    if (-f_lo <= opts.residual_tol || f_hi <= opts.residual_tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = real_value(rho, along(origin, dir, mid));
    if (fm <= 0.0) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }

  BoundaryHit hit;
  if (-f_lo <= f_hi) {
    hit.t = lo;
    hit.residual = -f_lo;
  } else {
    hit.t = hi;
    hit.residual = f_hi;
  }
  hit.point = along(origin, dir, hit.t);
  return hit;
}

Spectrum classify_hermitian(const CMatrix& form, double rank_tol) {
  Spectrum out;
  if (form.rows() == 0) return out;
  const CMatrix sym = 0.5 * (form + form.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::invalid_argument, "Hermitian eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  double norm = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    out.eigenvalues.push_back(ev[i]);
    norm = std::max(norm, std::abs(ev[i]));
  }
  const double cutoff = rank_tol * std::max(1.0, norm);
  for (double lambda : out.eigenvalues) {
    if (lambda > cutoff) {
      ++out.signature.positive;
    } else if (lambda < -cutoff) {
      ++out.signature.negative;
    } else {
      ++out.signature.zero;
    }
  }
  out.rank = out.signature.positive + out.signature.negative;
  return out;
}

std::vector<CVector> orthonormal_tangent_basis(const CVector& grad, int* dropped) {
  const Eigen::Index n = grad.size();
  const double gnorm = grad.norm();
  if (gnorm == 0.0) throw Error(ErrorCode::degenerate_gradient, "zero gradient");
  const CVector normal = grad.conjugate() / gnorm;

  Eigen::Index drop = 0;
  for (Eigen::Index j = 1; j < n; ++j) {
    if (std::abs(normal[j]) > std::abs(normal[drop])) drop = j;
  }
  if (dropped != nullptr) *dropped = static_cast<int>(drop) + 1;

  std::vector<CVector> basis;
  for (Eigen::Index a = 0; a < n; ++a) {
    if (a == drop) continue;
    CVector v = CVector::Zero(n);
    v[a] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      v -= normal * normal.dot(v);
      for (const auto& b : basis) v -= b * b.dot(v);
    }
    v /= v.norm();
    basis.push_back(std::move(v));
  }
  return basis;
}

LeviModel::LeviModel(DomainSpec domain) : domain_(std::move(domain)) {
  const int n = domain_.n;
  grad_.reserve(static_cast<std::size_t>(n));
  hess_.reserve(static_cast<std::size_t>(n * n));
  std::vector<Expr> anti;
  for (int j = 1; j <= n; ++j) {
    grad_.push_back(wirtinger(domain_.rho, j, Wirtinger::holomorphic).expr);
    anti.push_back(wirtinger(domain_.rho, j, Wirtinger::antiholomorphic).expr);
  }
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      hess_.push_back(wirtinger(anti[static_cast<std::size_t>(k - 1)], j, Wirtinger::holomorphic).expr);
    }
  }
}

double LeviModel::value(std::span<const cplx> z) const { return eval(domain_.rho, z).real(); }

CVector LeviModel::gradient(std::span<const cplx> z) const {
  CVector g(domain_.n);
  for (int j = 0; j < domain_.n; ++j) g[j] = eval(grad_[static_cast<std::size_t>(j)], z);
  return g;
}

CMatrix LeviModel::hessian(std::span<const cplx> z) const {
  const int n = domain_.n;
  CMatrix h(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) h(j, k) = eval(hess_[static_cast<std::size_t>(j * n + k)], z);
  }
  return h;
}

bool LeviModel::near_exceptional(std::span<const cplx> q, double radius) const {
  for (const auto& e : domain_.exceptional_points) {
    if (e.size() != q.size()) continue;
    double d2 = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) d2 += std::norm(q[i] - e[i]);
    if (std::sqrt(d2) < radius) return true;
  }
  return false;
}

LeviReport LeviModel::report(std::span<const cplx> q, const LeviOptions& opts) const {
  const int n = domain_.n;
  if (static_cast<int>(q.size()) != n) {
    throw Error(ErrorCode::invalid_argument, "point dimension mismatch");
  }
  LeviReport r;
  r.point.assign(q.begin(), q.end());
  r.near_exceptional = near_exceptional(q, opts.exceptional_radius);
  try {
    r.residual = std::abs(eval(domain_.rho, q));
    r.grad = gradient(q);
    r.hessian = hessian(q);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::division_by_zero || e.code() == ErrorCode::branch_cut) {
      throw Error(ErrorCode::degenerate_gradient,
                  std::string("degenerate gradient: defining function is not differentiable here (") +
                      e.what() + ")");
    }
    throw;
  }
  if (!(r.residual <= opts.residual_tol)) {
    throw Error(ErrorCode::invalid_argument,
                "point is not on the boundary (|rho| = " + std::to_string(r.residual) + ")");
  }
  r.grad_norm = r.grad.norm();
  if (!(r.grad_norm >= opts.grad_tol)) {
    throw Error(ErrorCode::degenerate_gradient,
                "degenerate gradient: |grad rho| = " + std::to_string(r.grad_norm));
  }

  r.chart = opts.chart;
  if (opts.chart == LeviChart::orthonormal) {
    r.tangent_basis = orthonormal_tangent_basis(r.grad, &r.pivot);
  } else {
    int m = opts.pivot;
    if (m == 0) {
      m = 1;
      for (int j = 2; j <= n; ++j) {
        if (std::abs(r.grad[j - 1]) > std::abs(r.grad[m - 1])) m = j;
      }
    }
    if (m < 1 || m > n) throw Error(ErrorCode::invalid_argument, "pivot out of range");
    const cplx gm = r.grad[m - 1];
    if (std::abs(gm) < opts.grad_tol) {
      throw Error(ErrorCode::invalid_argument, "graph chart pivot has vanishing gradient component");
    }
    r.pivot = m;
    for (int a = 1; a <= n; ++a) {
      if (a == m) continue;
      CVector v = CVector::Zero(n);
      v[a - 1] = 1.0;
      v[m - 1] = -r.grad[a - 1] / gm;
      r.tangent_basis.push_back(std::move(v));
    }
  }

  const auto dim = static_cast<Eigen::Index>(r.tangent_basis.size());
  CMatrix basis(n, dim);
  for (Eigen::Index a = 0; a < dim; ++a) basis.col(a) = r.tangent_basis[static_cast<std::size_t>(a)];
  // L_ab = sum_jk E_ja H_jk conj(E_kb)
  r.restricted_form = basis.transpose() * r.hessian * basis.conjugate();

  Spectrum spec = classify_hermitian(r.restricted_form, opts.rank_tol);
  r.eigenvalues = std::move(spec.eigenvalues);
  r.rank = spec.rank;
  r.signature = spec.signature;
  return r;
}

ScanSummary pseudoconvexity_scan(const LeviModel& model, int samples, std::uint64_t seed,
                                 const ScanOptions& opts) {
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "scan needs at least one sample");
  const DomainSpec& d = model.domain();

  Point focus_dir;
  if (opts.focus) {
    if (static_cast<int>(opts.focus->size()) != d.n) {
      throw Error(ErrorCode::invalid_argument, "focus dimension mismatch");
    }
    focus_dir = *opts.focus;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < focus_dir.size(); ++i) {
      focus_dir[i] -= d.anchor[i];
      norm2 += std::norm(focus_dir[i]);
    }
    if (norm2 == 0.0) throw Error(ErrorCode::invalid_argument, "focus equals the anchor");
    for (auto& c : focus_dir) c /= std::sqrt(norm2);
  }

  struct Slot {
    bool evaluated = false;
    bool near = false;
    LeviReport report;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(samples));
  parallel_for(slots.size(), [&](std::size_t i) {
    Rng rng = make_stream(seed, opts.stream, i);
    Point dir = random_direction(rng, d.n);
    if (opts.focus) {
      for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = focus_dir[k] + opts.focus_spread * dir[k];
    }
    const BoundaryHit hit = locate_boundary(d, dir);
    Slot& slot = slots[i];
    slot.near = model.near_exceptional(hit.point, opts.levi.exceptional_radius);
    try {
      slot.report = model.report(hit.point, opts.levi);
      slot.evaluated = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_gradient) throw;
    }
  });

  ScanSummary out;
  out.requested = samples;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  out.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (auto& slot : slots) {
    if (slot.near) ++out.near_exceptional;
    if (!slot.evaluated) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    const LeviReport& r = slot.report;
    ++out.rank_counts[r.rank];
    if (!r.eigenvalues.empty()) {
      if (r.eigenvalues.front() < out.min_eigenvalue) {
        out.min_eigenvalue = r.eigenvalues.front();
        out.min_witness = r.point;
      }
      if (r.eigenvalues.back() > out.max_eigenvalue) {
        out.max_eigenvalue = r.eigenvalues.back();
        out.max_witness = r.point;
      }
    }
    if (opts.keep_samples) out.samples.push_back({r.point, r.rank, r.eigenvalues});
  }
  if (out.evaluated == 0) {
    throw Error(ErrorCode::degenerate_gradient, "every scan sample had a degenerate gradient");
  }
  return out;
}

}  // namespace levikit
