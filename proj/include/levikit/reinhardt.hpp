#pragma once

// Normalized hyperbolic Reinhardt domains: block structures, the dimension of
// the identity component of their automorphism groups, and the quantitative
// Cauchy estimate on the domain {|z1| < 1, |z2| < R / (1 - |z1|^2)^gamma}.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "levikit/expr.hpp"

namespace levikit::reinhardt {

enum class BlockRole { ball, affine, rotation };

/// {inner < |w| < outer}; inner == 0 means a ball, punctured at 0 if set.
struct Shell {
  double inner = 0.0;
  double outer = 1.0;
  bool punctured = false;
};

/// Blocks 1..s are ball-type, s+1..t affine-type, t+1..p rotation-type.
struct NormalForm {
  int n = 0;
  int s = 0;
  int t = 0;
  int p = 0;
  std::vector<int> block_sizes;                // n_1..n_p
  std::vector<std::vector<double>> alpha;      // alpha[i][k - t - 1], i < s
  std::vector<std::vector<double>> beta;       // beta[j - s][k - t - 1]
  std::vector<Shell> base;                     // one shell per rotation block

  /// Zero exponents and unit-disc base shells for the given structure; validated.
  static NormalForm structure(int s, int t, std::vector<int> block_sizes);
};

void validate(const NormalForm& f);
BlockRole role(const NormalForm& f, int block);  // 1-based block index

/// Real dimension of one block's contribution: n^2 + 2n for ball and affine
/// blocks, n^2 for rotation blocks.
int block_dimension(BlockRole role, int size);

int dim_aut0(const NormalForm& f);

struct Witness {
  int s = 0;
  int t = 0;
  int p = 0;
  std::vector<int> block_sizes;
  bool excluded = false;
  std::string reason;
};

struct DimensionRow {
  int dimension = 0;
  std::vector<Witness> witnesses;
};

struct Enumeration {
  int n = 0;
  bool exclusions = false;
  std::vector<DimensionRow> rows;  // ascending dimension
  std::set<int> dimensions() const;
};

/// Reason a structure is ruled out when hunting for non-pseudoconvex bounded
/// realizations with non-compact Aut_0, or nullopt if it survives.
std::optional<std::string> exclusion_reason(int s, int t, int p);

/// Enumerates every composition of n into p ordered blocks and every role split
/// 0 <= s <= t <= p. Witnesses are deduplicated by their per-role size
/// multisets. With `apply_exclusions`, excluded structures are dropped.
Enumeration enumerate_dims(int n, bool apply_exclusions = false);

struct LemmaADomain {
  double R = 1.0;
  double gamma = 1.0;
};

void validate(const LemmaADomain& d);

/// R_mu = R / (2 (1 - |mu|^2)^gamma)
double cauchy_radius(const LemmaADomain& d, cplx mu);

/// M R_mu / (R_mu - |rho|)^2, the bound on |df/dz2 (mu, rho)| for |f| < M.
double lemma_a_bound(const LemmaADomain& d, double M, cplx mu, cplx rho);

bool membership(const LemmaADomain& d, std::span<const cplx> z);
bool membership(const NormalForm& f, std::span<const cplx> z);

enum class LemmaAVerdict {
  excluded_structure,
  not_simply_connected,
  non_hyperbolic,
  pseudoconvex,
  no_bounded_realization,
};

struct LemmaACase {
  LemmaAVerdict verdict = LemmaAVerdict::excluded_structure;
  std::string reason;
  std::optional<LemmaADomain> domain;  // set for no_bounded_realization
};

/// Case analysis for a normal form in C^2 whose Aut_0 is non-compact.
LemmaACase classify_lemma_a(const NormalForm& f);

std::string to_string(LemmaAVerdict v);

}  // namespace levikit::reinhardt
