#include "levikit/levikit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "levikit/catalog.hpp"
#include "levikit/harness.hpp"
#include "levikit/levi.hpp"
#include "levikit/reinhardt.hpp"
#include "levikit/sampling.hpp"

struct lk_domain {
  levikit::DomainSpec spec;
};

struct lk_reports {
  std::vector<levikit::harness::Report> reports;
};

namespace {

thread_local std::string g_last_error;

lk_status to_status(levikit::ErrorCode code) {
  using levikit::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return LK_INVALID_ARGUMENT;
    case ErrorCode::parse: return LK_PARSE_ERROR;
    case ErrorCode::division_by_zero: return LK_DIVISION_BY_ZERO;
    case ErrorCode::branch_cut: return LK_BRANCH_CUT;
    case ErrorCode::non_real: return LK_NON_REAL;
    case ErrorCode::degenerate_gradient: return LK_DEGENERATE_GRADIENT;
    case ErrorCode::no_boundary: return LK_NO_BOUNDARY;
    case ErrorCode::not_found: return LK_NOT_FOUND;
  }
  return LK_INTERNAL;
}

template <class F>
lk_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LK_OK;
  } catch (const levikit::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LK_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LK_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw levikit::Error(levikit::ErrorCode::invalid_argument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

levikit::Point point_from(const double* coords, int n) {
  require(coords != nullptr && n >= 0, "null coordinates");
  levikit::Point p;
  for (int i = 0; i < n; ++i) p.emplace_back(coords[2 * i], coords[2 * i + 1]);
  return p;
}

}  // namespace

extern "C" {

const char* lk_version(void) { return "0.1.0"; }

const char* lk_last_error(void) { return g_last_error.c_str(); }

const char* lk_status_name(lk_status status) {
  switch (status) {
    case LK_OK: return "ok";
    case LK_INVALID_ARGUMENT: return "invalid_argument";
    case LK_PARSE_ERROR: return "parse_error";
    case LK_DIVISION_BY_ZERO: return "division_by_zero";
    case LK_BRANCH_CUT: return "branch_cut";
    case LK_NON_REAL: return "non_real";
    case LK_DEGENERATE_GRADIENT: return "degenerate_gradient";
    case LK_NO_BOUNDARY: return "no_boundary";
    case LK_NOT_FOUND: return "not_found";
    case LK_INTERNAL: return "internal";
  }
  return "unknown";
}

void lk_string_free(char* s) { std::free(s); }

void lk_set_threads(int threads) { levikit::set_thread_count(threads); }

lk_status lk_domain_load(const char* ref, lk_domain** out) {
  return guarded([&] {
    require(ref != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new lk_domain{levikit::catalog::resolve_domain(ref)};
  });
}

lk_status lk_domain_from_text(const char* text, const char* name, lk_domain** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    for (auto& def : levikit::catalog::parse_definitions(text)) {
      auto* d = std::get_if<levikit::DomainSpec>(&def);
      if (d != nullptr && (name == nullptr || d->name == name)) {
        *out = new lk_domain{std::move(*d)};
        return;
      }
    }
    throw levikit::Error(levikit::ErrorCode::not_found, "no matching domain in text");
  });
}

void lk_domain_free(lk_domain* d) { delete d; }

lk_status lk_domain_dimension(const lk_domain* d, int* out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = d->spec.n;
  });
}

lk_status lk_domain_name(const lk_domain* d, char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = dup(d->spec.name);
  });
}

lk_status lk_domain_rho(const lk_domain* d, char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = dup(levikit::print(d->spec.rho));
  });
}

lk_status lk_parse_point(const char* text, double* coords, int capacity, int* n) {
  return guarded([&] {
    require(text != nullptr && n != nullptr, "null argument");
    const levikit::Point p = levikit::catalog::parse_point(text);
    *n = static_cast<int>(p.size());
    require(coords != nullptr || capacity == 0, "null coordinate buffer");
    require(static_cast<int>(p.size()) <= capacity, "coordinate buffer too small");
    for (std::size_t i = 0; i < p.size(); ++i) {
      coords[2 * i] = p[i].real();
      coords[2 * i + 1] = p[i].imag();
    }
  });
}

lk_status lk_domain_eval(const lk_domain* d, const double* coords, int n, double* re, double* im) {
  return guarded([&] {
    require(d != nullptr && re != nullptr && im != nullptr, "null argument");
    require(n == d->spec.n, "point dimension mismatch");
    const auto v = levikit::eval(d->spec.rho, point_from(coords, n));
    *re = v.real();
    *im = v.imag();
  });
}

lk_status lk_levi(const lk_domain* d, const double* coords, int n, lk_chart chart, int pivot, lk_format format,
                  char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    require(n == d->spec.n, "point dimension mismatch");
    levikit::LeviOptions opts;
    opts.chart = chart == LK_CHART_GRAPH ? levikit::LeviChart::graph : levikit::LeviChart::orthonormal;
    opts.pivot = pivot;
    const auto r = levikit::levi_report(d->spec, point_from(coords, n), opts);
    *out = dup(format == LK_FORMAT_JSON ? levikit::harness::to_json(r, d->spec)
                                        : levikit::harness::to_markdown(r, d->spec));
  });
}

lk_status lk_levi_rank(const lk_domain* d, const double* coords, int n, int* rank) {
  return guarded([&] {
    require(d != nullptr && rank != nullptr, "null argument");
    require(n == d->spec.n, "point dimension mismatch");
    *rank = levikit::levi_report(d->spec, point_from(coords, n)).rank;
  });
}

lk_status lk_enumerate(int n, int exclusions, lk_format format, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto e = levikit::reinhardt::enumerate_dims(n, exclusions != 0);
    *out = dup(format == LK_FORMAT_JSON ? levikit::harness::to_json(e) : levikit::harness::to_markdown(e));
  });
}

lk_status lk_profile(const double* eps, int count, lk_format format, char** out) {
  return guarded([&] {
    require(out != nullptr && count >= 0 && (eps != nullptr || count == 0), "null argument");
    const auto rows = levikit::harness::profile_exceptional(std::vector<double>(eps, eps + count));
    *out = dup(format == LK_FORMAT_JSON ? levikit::harness::to_json(rows) : levikit::harness::to_markdown(rows));
  });
}

void lk_verify_options_init(lk_verify_options* opts) {
  if (opts == nullptr) return;
  opts->seed = 42;
  opts->samples = 0;
  opts->tol = 0.0;
  opts->threads = 0;
  opts->timing = 0;
  opts->config_json = nullptr;
}

lk_status lk_verify(const char* scenario, const lk_verify_options* opts, const lk_domain* domain, lk_reports** out) {
  return guarded([&] {
    require(scenario != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    lk_verify_options defaults;
    lk_verify_options_init(&defaults);
    const lk_verify_options& o = opts != nullptr ? *opts : defaults;
    levikit::harness::RunOptions run;
    run.seed = o.seed;
    if (o.samples > 0) run.samples = o.samples;
    if (o.tol > 0.0) run.tol = o.tol;
    run.timing = o.timing != 0;
    if (o.config_json != nullptr) levikit::harness::load_config(o.config_json, run);
    if (domain != nullptr) run.domain = domain->spec;
    levikit::set_thread_count(o.threads);
    *out = new lk_reports{levikit::harness::run_scenario(scenario, run)};
  });
}

int lk_reports_passed(const lk_reports* r) {
  if (r == nullptr) return 0;
  for (const auto& rep : r->reports) {
    if (rep.overall() != levikit::harness::Status::pass) return 0;
  }
  return 1;
}

lk_status lk_reports_render(const lk_reports* r, lk_format format, char** out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    *out = dup(format == LK_FORMAT_JSON ? levikit::harness::to_json(r->reports)
                                        : levikit::harness::to_markdown(r->reports));
  });
}

void lk_reports_free(lk_reports* r) { delete r; }

}  // extern "C"
