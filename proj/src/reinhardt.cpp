#include "levikit/reinhardt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>

namespace levikit::reinhardt {

NormalForm NormalForm::structure(int s, int t, std::vector<int> block_sizes) {
  NormalForm f;
  f.p = static_cast<int>(block_sizes.size());
  f.n = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  f.s = s;
  f.t = t;
  f.block_sizes = std::move(block_sizes);
  const int rot = std::max(0, f.p - t);
  f.alpha.assign(static_cast<std::size_t>(std::max(0, s)), std::vector<double>(static_cast<std::size_t>(rot), 0.0));
  f.beta.assign(static_cast<std::size_t>(std::max(0, t - s)), std::vector<double>(static_cast<std::size_t>(rot), 0.0));
  f.base.assign(static_cast<std::size_t>(rot), Shell{});
  validate(f);
  return f;
}

void validate(const NormalForm& f) {
  if (!(0 <= f.s && f.s <= f.t && f.t <= f.p && f.p <= f.n)) {
    throw Error(ErrorCode::invalid_argument, "need 0 <= s <= t <= p <= n");
  }
  if (static_cast<int>(f.block_sizes.size()) != f.p) {
    throw Error(ErrorCode::invalid_argument, "expected p block sizes");
  }
  int total = 0;
  for (int size : f.block_sizes) {
    if (size < 1) throw Error(ErrorCode::invalid_argument, "block sizes must be positive");
    total += size;
  }
  if (total != f.n) throw Error(ErrorCode::invalid_argument, "block sizes must sum to n");
  const auto rot = static_cast<std::size_t>(f.p - f.t);
  if (f.alpha.size() != static_cast<std::size_t>(f.s) ||
      std::any_of(f.alpha.begin(), f.alpha.end(), [&](const auto& r) { return r.size() != rot; })) {
    throw Error(ErrorCode::invalid_argument, "alpha must be s x (p - t)");
  }
  if (f.beta.size() != static_cast<std::size_t>(f.t - f.s) ||
      std::any_of(f.beta.begin(), f.beta.end(), [&](const auto& r) { return r.size() != rot; })) {
    throw Error(ErrorCode::invalid_argument, "beta must be (t - s) x (p - t)");
  }
  if (f.base.size() != rot) throw Error(ErrorCode::invalid_argument, "need one base shell per rotation block");
  for (const auto& sh : f.base) {
    if (!(sh.inner >= 0.0 && sh.outer > sh.inner)) {
      throw Error(ErrorCode::invalid_argument, "base shell needs 0 <= inner < outer");
    }
  }
}

BlockRole role(const NormalForm& f, int block) {
  if (block < 1 || block > f.p) throw Error(ErrorCode::invalid_argument, "block index out of range");
  if (block <= f.s) return BlockRole::ball;
  if (block <= f.t) return BlockRole::affine;
  return BlockRole::rotation;
}

int block_dimension(BlockRole role, int size) {
  // SU(n,1) acting on the ball and U(n) x C^n acting affinely both have
  // n^2 + 2n real parameters; U(n) alone has n^2.
  return role == BlockRole::rotation ? size * size : size * size + 2 * size;
}

int dim_aut0(const NormalForm& f) {
  validate(f);
  int dim = 0;
  for (int b = 1; b <= f.p; ++b) dim += block_dimension(role(f, b), f.block_sizes[static_cast<std::size_t>(b - 1)]);
  return dim;
}

std::set<int> Enumeration::dimensions() const {
  std::set<int> out;
  for (const auto& row : rows) out.insert(row.dimension);
  return out;
}

std::optional<std::string> exclusion_reason(int s, int t, int p) {
  if (t == 0) return "Aut_0 is compact (t = 0)";
  if (p == t && s < t) return "not hyperbolic (p = t, s < t)";
  if (p == t) return "product of balls, pseudoconvex (p = t = s)";
  return std::nullopt;
}

namespace {

void compositions(int n, std::vector<int>& current, const std::function<void(const std::vector<int>&)>& emit) {
  if (n == 0) {
    emit(current);
    return;
  }
  for (int first = 1; first <= n; ++first) {
    current.push_back(first);
    compositions(n - first, current, emit);
    current.pop_back();
  }
}

}  // namespace

Enumeration enumerate_dims(int n, bool apply_exclusions) {
  if (n < 1 || n > 8) throw Error(ErrorCode::invalid_argument, "enumeration supports 1 <= n <= 8");
  // key: (s, t, p, canonical sizes) -> dimension
  std::map<std::tuple<int, int, int, std::vector<int>>, int> seen;
  std::vector<int> scratch;
  compositions(n, scratch, [&](const std::vector<int>& sizes) {
    const int p = static_cast<int>(sizes.size());
    for (int t = 0; t <= p; ++t) {
      for (int s = 0; s <= t; ++s) {
        std::vector<int> canon = sizes;
        auto ball_end = canon.begin() + s;
        auto affine_end = canon.begin() + t;
        std::sort(canon.begin(), ball_end, std::greater<>());
        std::sort(ball_end, affine_end, std::greater<>());
        std::sort(affine_end, canon.end(), std::greater<>());
        auto key = std::make_tuple(s, t, p, canon);
        if (seen.contains(key)) continue;
        seen.emplace(key, dim_aut0(NormalForm::structure(s, t, sizes)));
      }
    }
  });

  std::map<int, DimensionRow> rows;
  for (const auto& [key, dim] : seen) {
    const auto& [s, t, p, sizes] = key;
    Witness w{s, t, p, sizes, false, {}};
    if (auto reason = exclusion_reason(s, t, p)) {
      w.excluded = true;
      w.reason = *reason;
    }
    if (apply_exclusions && w.excluded) continue;
    auto& row = rows[dim];
    row.dimension = dim;
    row.witnesses.push_back(std::move(w));
  }
  Enumeration out;
  out.n = n;
  out.exclusions = apply_exclusions;
  for (auto& [dim, row] : rows) out.rows.push_back(std::move(row));
  return out;
}

void validate(const LemmaADomain& d) {
  if (!(d.R > 0.0) || !(d.gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "need R > 0 and gamma > 0");
}

double cauchy_radius(const LemmaADomain& d, cplx mu) {
  validate(d);
  const double m2 = std::norm(mu);
  if (!(m2 < 1.0)) throw Error(ErrorCode::invalid_argument, "need |mu| < 1");
  return d.R / (2.0 * std::pow(1.0 - m2, d.gamma));
}

double lemma_a_bound(const LemmaADomain& d, double M, cplx mu, cplx rho) {
  if (!(M > 0.0)) throw Error(ErrorCode::invalid_argument, "need M > 0");
  const double r_mu = cauchy_radius(d, mu);
  const double gap = r_mu - std::abs(rho);
  if (!(gap > 0.0)) throw Error(ErrorCode::invalid_argument, "need |rho| < R_mu");
  return M * r_mu / (gap * gap);
}

bool membership(const LemmaADomain& d, std::span<const cplx> z) {
  validate(d);
  if (z.size() != 2) throw Error(ErrorCode::invalid_argument, "point must lie in C^2");
  const double m2 = std::norm(z[0]);
  if (!(m2 < 1.0)) return false;
  return std::abs(z[1]) < d.R / std::pow(1.0 - m2, d.gamma);
}

namespace {

double block_norm2(std::span<const cplx> z, std::size_t offset, int size) {
  double s = 0.0;
  for (int i = 0; i < size; ++i) s += std::norm(z[offset + static_cast<std::size_t>(i)]);
  return s;
}

}  // namespace

bool membership(const NormalForm& f, std::span<const cplx> z) {
  validate(f);
  if (static_cast<int>(z.size()) != f.n) throw Error(ErrorCode::invalid_argument, "point dimension mismatch");
  std::vector<std::size_t> offset(static_cast<std::size_t>(f.p), 0);
  std::vector<double> norm2(static_cast<std::size_t>(f.p), 0.0);
  std::size_t at = 0;
  for (int b = 0; b < f.p; ++b) {
    offset[static_cast<std::size_t>(b)] = at;
    norm2[static_cast<std::size_t>(b)] = block_norm2(z, at, f.block_sizes[static_cast<std::size_t>(b)]);
    at += static_cast<std::size_t>(f.block_sizes[static_cast<std::size_t>(b)]);
  }
  for (int i = 0; i < f.s; ++i) {
    if (!(norm2[static_cast<std::size_t>(i)] < 1.0)) return false;
  }
  for (int k = f.t; k < f.p; ++k) {
    const auto col = static_cast<std::size_t>(k - f.t);
    double scale = 1.0;
    for (int i = 0; i < f.s; ++i) {
      scale *= std::pow(1.0 - norm2[static_cast<std::size_t>(i)], f.alpha[static_cast<std::size_t>(i)][col]);
    }
    for (int j = f.s; j < f.t; ++j) {
      scale *= std::exp(-f.beta[static_cast<std::size_t>(j - f.s)][col] * norm2[static_cast<std::size_t>(j)]);
    }
    const double w = std::sqrt(norm2[static_cast<std::size_t>(k)]) / scale;
    const Shell& sh = f.base[col];
    if (!(w < sh.outer)) return false;
    if (sh.inner > 0.0 && !(w > sh.inner)) return false;
    if (sh.inner == 0.0 && sh.punctured && !(w > 0.0)) return false;
  }
  return true;
}

LemmaACase classify_lemma_a(const NormalForm& f) {
  validate(f);
  if (f.n != 2) throw Error(ErrorCode::invalid_argument, "case analysis applies in C^2");
  LemmaACase out;
  if (auto reason = exclusion_reason(f.s, f.t, f.p)) {
    out.verdict = LemmaAVerdict::excluded_structure;
    out.reason = *reason;
    return out;
  }
  // Survivors in C^2: t = 1, p = 2, n_1 = n_2 = 1.
  const Shell& sh = f.base.front();
  if (sh.inner > 0.0 || sh.punctured) {
    out.verdict = LemmaAVerdict::not_simply_connected;
    out.reason = sh.inner > 0.0 ? "base is an annulus" : "base is a punctured disc";
    return out;
  }
  if (!std::isfinite(sh.outer)) {
    out.verdict = LemmaAVerdict::non_hyperbolic;
    out.reason = "base is the whole plane";
    return out;
  }
  if (f.s == 0) {
    out.verdict = LemmaAVerdict::non_hyperbolic;
    out.reason = "contains the complex line {z2 = 0}";
    return out;
  }
  const double alpha = f.alpha[0][0];
  if (alpha >= 0.0) {
    out.verdict = LemmaAVerdict::pseudoconvex;
    out.reason = "alpha >= 0";
    return out;
  }
  out.verdict = LemmaAVerdict::no_bounded_realization;
  out.reason = "alpha < 0: bounded holomorphic functions do not depend on z2";
  out.domain = LemmaADomain{sh.outer, -alpha};
  return out;
}

std::string to_string(LemmaAVerdict v) {
  switch (v) {
    case LemmaAVerdict::excluded_structure: return "excluded_structure";
    case LemmaAVerdict::not_simply_connected: return "not_simply_connected";
    case LemmaAVerdict::non_hyperbolic: return "non_hyperbolic";
    case LemmaAVerdict::pseudoconvex: return "pseudoconvex";
    case LemmaAVerdict::no_bounded_realization: return "no_bounded_realization";
  }
  return {};
}

}  // namespace levikit::reinhardt
