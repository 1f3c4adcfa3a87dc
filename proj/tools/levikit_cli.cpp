// Command-line front end over the C API.
//
// Exit codes: 0 all checks pass, 1 a check failed (or the Levi form is
// undefined at the requested point), 2 usage or infrastructure error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "levikit/levikit.h"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  int samples = 0;
  std::uint64_t seed = 42;
  double tol = 0.0;
  std::string format = "json";
  std::string out;
  int threads = 0;
  bool timing = false;
  std::string config;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--samples", c.samples, "Sample count override for every sampled check")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--tol", c.tol, "Tolerance override for residual checks")->check(CLI::PositiveNumber);
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "md"}))
      ->capture_default_str();
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
  app->add_option("--threads", c.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app->add_flag("--timing", c.timing, "Record per-check runtimes (output is then not reproducible)");
  app->add_option("--config", c.config, "JSON file with per-check tolerance overrides")->check(CLI::ExistingFile);
}

lk_format format_of(const Common& c) { return c.format == "md" ? LK_FORMAT_MARKDOWN : LK_FORMAT_JSON; }

struct Failure {
  lk_status status;
  std::string message;
};

void check(lk_status s) {
  if (s != LK_OK) throw Failure{s, lk_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { lk_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct DomainDeleter {
  void operator()(lk_domain* d) const { lk_domain_free(d); }
};
using OwnedDomain = std::unique_ptr<lk_domain, DomainDeleter>;

struct ReportsDeleter {
  void operator()(lk_reports* r) const { lk_reports_free(r); }
};
using OwnedReports = std::unique_ptr<lk_reports, ReportsDeleter>;

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  f << text;
  if (!f) throw Failure{LK_INTERNAL, "cannot write '" + c.out + "'"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{LK_NOT_FOUND, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

OwnedDomain load_domain(const std::string& ref) {
  lk_domain* d = nullptr;
  check(lk_domain_load(ref.c_str(), &d));
  return OwnedDomain(d);
}

int run_verify(const std::string& scenario, const std::string& domain_ref, const Common& c) {
  lk_verify_options opts;
  lk_verify_options_init(&opts);
  opts.seed = c.seed;
  opts.samples = c.samples;
  opts.tol = c.tol;
  opts.threads = c.threads;
  opts.timing = c.timing ? 1 : 0;
  std::string config;
  if (!c.config.empty()) {
    config = read_file(c.config);
    opts.config_json = config.c_str();
  }
  OwnedDomain domain;
  if (!domain_ref.empty()) domain = load_domain(domain_ref);
  lk_reports* raw = nullptr;
  check(lk_verify(scenario.c_str(), &opts, domain.get(), &raw));
  OwnedReports reports(raw);
  char* text = nullptr;
  check(lk_reports_render(reports.get(), format_of(c), &text));
  emit(c, OwnedString(text).get());
  return lk_reports_passed(reports.get()) ? kPass : kFail;
}

int run_levi(const std::string& domain_ref, const std::string& point, const std::string& chart, int pivot,
             const Common& c) {
  OwnedDomain domain = load_domain(domain_ref);
  int n = 0;
  check(lk_domain_dimension(domain.get(), &n));
  std::vector<double> coords(2 * static_cast<std::size_t>(n));
  int got = 0;
  check(lk_parse_point(point.c_str(), coords.data(), n, &got));
  if (got != n) throw Failure{LK_INVALID_ARGUMENT, "point has " + std::to_string(got) + " coordinates, domain needs " + std::to_string(n)};
  char* text = nullptr;
  const lk_status s = lk_levi(domain.get(), coords.data(), n, chart == "graph" ? LK_CHART_GRAPH : LK_CHART_ORTHONORMAL,
                              pivot, format_of(c), &text);
  if (s == LK_DEGENERATE_GRADIENT) {
    const std::string msg = lk_last_error();
    if (c.format == "json") {
      std::string escaped;
      for (char ch : msg) {
        if (ch == '"' || ch == '\\') escaped += '\\';
        escaped += ch;
      }
      emit(c, "{\n  \"status\": \"degenerate_gradient\",\n  \"message\": \"" + escaped + "\"\n}\n");
    } else {
      emit(c, msg + "\n");
    }
    return kFail;
  }
  check(s);
  emit(c, OwnedString(text).get());
  return kPass;
}

int run_enumerate(int dim, bool exclusions, const Common& c) {
  char* text = nullptr;
  check(lk_enumerate(dim, exclusions ? 1 : 0, format_of(c), &text));
  emit(c, OwnedString(text).get());
  return kPass;
}

int run_profile(const std::vector<double>& eps, const Common& c) {
  char* text = nullptr;
  check(lk_profile(eps.data(), static_cast<int>(eps.size()), format_of(c), &text));
  emit(c, OwnedString(text).get());
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levikit: Levi forms, automorphism checks and Reinhardt enumeration"};
  app.require_subcommand(1);

  Common verify_opts, levi_opts, enum_opts, profile_opts;

  std::string scenario;
  std::string verify_domain;
  auto* verify = app.add_subcommand("verify", "Run a verification scenario");
  verify->add_option("scenario", scenario, "theorem1 | theorem2 | lemma-a | all")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "lemma-a", "all"}));
  verify->add_option("--domain", verify_domain, "Replace the scenario's domain (builtin:... or file)");
  add_common(verify, verify_opts);

  std::string levi_domain, levi_point, chart = "orthonormal";
  int pivot = 0;
  auto* levi = app.add_subcommand("levi", "Levi form at a boundary point");
  levi->add_option("--domain", levi_domain, "builtin:NAME[?k=v] or PATH[#NAME]")->required();
  levi->add_option("--point", levi_point, "Boundary point, e.g. \"(1,0,0)\"")->required();
  levi->add_option("--chart", chart, "Tangent-space chart")
      ->check(CLI::IsMember({"orthonormal", "graph"}))
      ->capture_default_str();
  levi->add_option("--pivot", pivot, "Graph chart: 1-based coordinate solved for (0: automatic)")
      ->check(CLI::NonNegativeNumber);
  add_common(levi, levi_opts);

  int dim = 0;
  bool exclusions = false;
  auto* enumerate = app.add_subcommand("enumerate", "Attainable dim Aut_0 of normalized Reinhardt forms");
  enumerate->add_option("--dim", dim, "Complex dimension (1..8)")->required()->check(CLI::Range(1, 8));
  enumerate->add_flag("--exclusions", exclusions, "Drop structures excluded by the non-pseudoconvex search");
  add_common(enumerate, enum_opts);

  std::vector<double> eps;
  auto* profile = app.add_subcommand("profile", "Boundary slices near the exceptional point (exploratory)");
  profile->add_option("--eps", eps, "Strictly decreasing positive radii")->delimiter(',');
  add_common(profile, profile_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  for (const Common* c : {&verify_opts, &levi_opts, &enum_opts, &profile_opts}) {
    if (c->threads > 0) lk_set_threads(c->threads);
  }
  try {
    if (*verify) return run_verify(scenario, verify_domain, verify_opts);
    if (*levi) return run_levi(levi_domain, levi_point, chart, pivot, levi_opts);
    if (*enumerate) return run_enumerate(dim, exclusions, enum_opts);
    if (*profile) return run_profile(eps, profile_opts);
  } catch (const Failure& f) {
    std::cerr << "levikit: " << lk_status_name(f.status) << ": " << f.message << "\n";
    return kUsage;
  }
  return kUsage;
}
