#pragma once

// Scenario runner: executes the verification checks for each domain family and
// renders reports as JSON or markdown.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levikit/expr.hpp"
#include "levikit/levi.hpp"
#include "levikit/reinhardt.hpp"

namespace levikit::harness {

enum class Status { pass, fail, skip };

std::string to_string(Status s);
Status status_from_string(std::string_view s);

struct CheckRecord {
  std::string id;
  std::string description;
  std::string paper_ref;
  Status status = Status::pass;
  std::optional<double> max_residual;
  std::optional<double> tolerance;
  int samples = 0;
  std::vector<Point> witness;
  std::optional<double> runtime_ms;
  std::string note;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::string> notes;

  /// pass iff every non-skipped check passes.
  Status overall() const;
  const CheckRecord* find(std::string_view id) const;

  friend bool operator==(const Report&, const Report&) = default;
};

struct RunOptions {
  std::uint64_t seed = 42;
  std::optional<int> samples;  // overrides every per-check sample count
  std::optional<double> tol;   // overrides residual-type tolerances
  std::map<std::string, double, std::less<>> tolerances;  // per check id, wins over `tol`
  bool timing = false;
  std::optional<DomainSpec> domain;  // replaces the scenario's primary domain
};

/// Reads {"tolerances": {"check.id": value, ...}} into `opts`.
void load_config(std::string_view json_text, RunOptions& opts);

/// Sample counts below this are flagged as low coverage.
inline constexpr int kLowCoverage = 100;

Report run_theorem1(const RunOptions& opts = {});
Report run_theorem2(const RunOptions& opts = {});
Report run_lemma_a(const RunOptions& opts = {});

/// "theorem1", "theorem2", "lemma-a" or "all".
std::vector<Report> run_scenario(std::string_view name, const RunOptions& opts = {});
std::vector<std::string> scenario_names();

std::string to_json(const Report& r);
std::string to_json(const std::vector<Report>& reports);
Report report_from_json(std::string_view text);
std::string to_markdown(const Report& r);
std::string to_markdown(const std::vector<Report>& reports);

std::string to_json(const LeviReport& r, const DomainSpec& d);
std::string to_markdown(const LeviReport& r, const DomainSpec& d);

std::string to_json(const reinhardt::Enumeration& e);
std::string to_markdown(const reinhardt::Enumeration& e);

struct ProfileRow {
  double eps = 0.0;
  std::optional<double> max_abs_z2;  // empty when the slice misses the domain
  std::optional<double> slope;       // d log(max |z2|) / d log(eps) against the previous row
  Point witness;
  std::string note;
};

/// Slices the boundary of the bounded non-pseudoconvex domain at |z1 - 1| = eps
/// and records the largest |z2| found. `eps` must be strictly decreasing and
/// positive. Exploratory: no pass/fail judgment.
std::vector<ProfileRow> profile_exceptional(const std::vector<double>& eps, int arc_samples = 64,
                                            int angle_samples = 32);

std::string to_json(const std::vector<ProfileRow>& rows);
std::string to_markdown(const std::vector<ProfileRow>& rows);

}  // namespace levikit::harness
