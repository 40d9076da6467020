#include "ergolab/ergolab.h"

#include <algorithm>
#include <exception>
#include <string>

#include "ergolab/errors.hpp"
#include "report.hpp"

using ergolab::report::Json;

struct ergo_settings {
  ergolab::report::Settings s;
};

struct ergo_report {
  std::string json;
  ergolab::report::Output out;
};

struct ergo_expr {
  ergolab::HardyExpr e;
};

struct ergo_sequence {
  ergolab::GeneratedSequence g;
};

struct ergo_model {
  ergolab::OperatorModel m;
};

struct ergo_vector {
  ergolab::VectorModel v;
};

namespace {

thread_local std::string g_last_error;

template <class F>
ergo_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return ERGO_OK;
  } catch (const ergolab::Error& e) {
    g_last_error = e.what();
    return static_cast<ergo_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return ERGO_PARSE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ERGO_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return ERGO_INTERNAL_ERROR;
  }
}

ergo_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return ERGO_INVALID_ARGUMENT;
}

ergolab::report::Settings settings_of(const ergo_settings* s) { return s ? s->s : ergolab::report::Settings{}; }

ergo_status emit(ergolab::report::Output out, ergo_report** dst) {
  auto* r = new ergo_report;
  r->json = out.json.dump(2) + "\n";
  r->out = std::move(out);
  *dst = r;
  return ERGO_OK;
}

template <class F>
ergo_status run_driver(ergo_report** out, F&& f) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { emit(f(), out); });
}

}  // namespace

extern "C" {

const char* ergo_version(void) { return "1.0.0"; }

const char* ergo_status_name(ergo_status status) {
  switch (status) {
    case ERGO_OK: return "ok";
    case ERGO_INVALID_ARGUMENT: return "invalid-argument";
    case ERGO_PARSE_ERROR: return "parse-error";
    case ERGO_DOMAIN_ERROR: return "domain-error";
    case ERGO_PRECISION_EXHAUSTED: return "precision-exhausted";
    case ERGO_UNSUPPORTED: return "unsupported";
    case ERGO_GUARD_EXCEEDED: return "guard-exceeded";
    case ERGO_IO_ERROR: return "io-error";
    case ERGO_PROPERTY_FAILED: return "property-failed";
    case ERGO_INTERNAL_ERROR: return "internal-error";
  }
  return "unknown";
}

const char* ergo_last_error(void) { return g_last_error.c_str(); }

ergo_status ergo_settings_new(ergo_settings** out) {
  if (!out) return null_arg("out");
  *out = new ergo_settings;
  return ERGO_OK;
}

void ergo_settings_free(ergo_settings* s) { delete s; }

ergo_status ergo_settings_set_n(ergo_settings* s, int64_t N) {
  if (!s) return null_arg("settings");
  if (N > 0)
    s->s.N = N;
  else
    s->s.N.reset();
  return ERGO_OK;
}

ergo_status ergo_settings_set_precision_digits(ergo_settings* s, int digits) {
  if (!s) return null_arg("settings");
  if (digits < 16 || digits > 10000) {
    g_last_error = "precision digits must lie in [16, 10000]";
    return ERGO_INVALID_ARGUMENT;
  }
  s->s.precision_digits = digits;
  return ERGO_OK;
}

ergo_status ergo_settings_set_tolerance(ergo_settings* s, double converge, double diverge) {
  if (!s) return null_arg("settings");
  if (!(converge > 0) || !(diverge > 0)) {
    g_last_error = "tolerances must be positive";
    return ERGO_INVALID_ARGUMENT;
  }
  s->s.tol = {converge, diverge};
  return ERGO_OK;
}

ergo_status ergo_settings_set_jobs(ergo_settings* s, int jobs) {
  if (!s) return null_arg("settings");
  if (jobs < 1) {
    g_last_error = "jobs must be >= 1";
    return ERGO_INVALID_ARGUMENT;
  }
  s->s.jobs = jobs;
  return ERGO_OK;
}

ergo_status ergo_settings_set_seed(ergo_settings* s, uint64_t seed) {
  if (!s) return null_arg("settings");
  s->s.seed = seed;
  return ERGO_OK;
}

const char* ergo_report_json(const ergo_report* r) { return r ? r->json.c_str() : nullptr; }
int ergo_report_failed(const ergo_report* r) { return r && r->out.failed ? 1 : 0; }
size_t ergo_report_file_count(const ergo_report* r) { return r ? r->out.files.size() : 0; }

const char* ergo_report_file_name(const ergo_report* r, size_t i) {
  return r && i < r->out.files.size() ? r->out.files[i].first.c_str() : nullptr;
}

const char* ergo_report_file_data(const ergo_report* r, size_t i, size_t* size) {
  if (!r || i >= r->out.files.size()) return nullptr;
  if (size) *size = r->out.files[i].second.size();
  return r->out.files[i].second.data();
}

void ergo_report_free(ergo_report* r) { delete r; }

ergo_status ergo_classify(const ergo_settings* s, const char* expr, ergo_report** out) {
  if (!expr) return null_arg("expr");
  return run_driver(out, [&] { return ergolab::report::classify(expr, settings_of(s)); });
}

ergo_status ergo_seq(const ergo_settings* s, const char* f, const char* perturbation, int dedup, int binary,
                     ergo_report** out) {
  if (!f) return null_arg("f");
  return run_driver(out, [&] {
    return ergolab::report::sequence(f, perturbation ? perturbation : "zero", dedup != 0, binary != 0, settings_of(s));
  });
}

ergo_status ergo_bk(const ergo_settings* s, const char* f, int64_t K, ergo_report** out) {
  if (!f) return null_arg("f");
  return run_driver(out, [&] { return ergolab::report::bk(f, K, settings_of(s)); });
}

ergo_status ergo_set(const ergo_settings* s, const char* spec, int regularity_K, const char* format, int64_t akm_k,
                     int64_t akm_m, ergo_report** out) {
  if (!spec) return null_arg("spec");
  return run_driver(out, [&] {
    ergolab::report::SetOptions opt;
    opt.regularity_K = regularity_K;
    opt.format = format ? format : "none";
    if (akm_k > 0 && akm_m > 0) opt.akm = std::make_pair(akm_k, akm_m);
    return ergolab::report::index_set(spec, opt, settings_of(s));
  });
}

ergo_status ergo_weyl(const ergo_settings* s, const char* weight, int m_max, ergo_report** out) {
  if (!weight) return null_arg("weight");
  return run_driver(out, [&] { return ergolab::report::weyl(weight, m_max, settings_of(s)); });
}

ergo_status ergo_bosh(const ergo_settings* s, const char* expr, ergo_report** out) {
  if (!expr) return null_arg("expr");
  return run_driver(out, [&] { return ergolab::report::bosh(expr, settings_of(s)); });
}

ergo_status ergo_qtest(const ergo_settings* s, const char* weight, int k_max, int m_bound, ergo_report** out) {
  if (!weight) return null_arg("weight");
  return run_driver(out, [&] { return ergolab::report::qtest(weight, k_max, m_bound, settings_of(s)); });
}

ergo_status ergo_average(const ergo_settings* s, const char* config_json, ergo_report** out) {
  if (!config_json) return null_arg("config_json");
  return run_driver(out, [&] { return ergolab::report::average(Json::parse(config_json), settings_of(s)); });
}

ergo_status ergo_battery(const ergo_settings* s, const char* battery_json, ergo_report** out) {
  if (!battery_json) return null_arg("battery_json");
  return run_driver(out, [&] { return ergolab::report::battery(Json::parse(battery_json), settings_of(s)); });
}

ergo_status ergo_expr_parse(const char* text, ergo_expr** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new ergo_expr{ergolab::HardyExpr::parse(text)}; });
}

ergo_status ergo_expr_print(const ergo_expr* e, char* buf, size_t cap, size_t* needed) {
  if (!e) return null_arg("expr");
  const std::string s = e->e.str();
  if (needed) *needed = s.size();
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, s.size());
    s.copy(buf, n);
    buf[n] = '\0';
    if (n < s.size()) {
      g_last_error = "buffer too small";
      return ERGO_INVALID_ARGUMENT;
    }
  }
  return ERGO_OK;
}

void ergo_expr_free(ergo_expr* e) { delete e; }

ergo_status ergo_sequence_generate(const ergo_expr* f, const char* perturbation, int64_t N, int jobs,
                                   ergo_sequence** out) {
  if (!f) return null_arg("f");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    ergolab::SubsequenceSpec spec{f->e, ergolab::Perturbation::parse(perturbation ? perturbation : "zero"), {}};
    *out = new ergo_sequence{ergolab::generate_a(spec, N, jobs < 1 ? 1 : jobs)};
  });
}

int64_t ergo_sequence_length(const ergo_sequence* q) { return q ? static_cast<int64_t>(q->g.a.size()) : 0; }
const int64_t* ergo_sequence_data(const ergo_sequence* q) { return q ? q->g.a.data() : nullptr; }
int64_t ergo_sequence_flagged(const ergo_sequence* q) { return q ? q->g.flagged : 0; }
void ergo_sequence_free(ergo_sequence* q) { delete q; }

ergo_status ergo_model_parse(const char* spec, ergo_model** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new ergo_model{ergolab::OperatorModel::parse(spec)}; });
}

void ergo_model_free(ergo_model* m) { delete m; }

ergo_status ergo_vector_parse(const char* spec, ergo_vector** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new ergo_vector{ergolab::VectorModel::parse(spec)}; });
}

void ergo_vector_free(ergo_vector* v) { delete v; }

ergo_status ergo_model_gram(const ergo_model* m, const ergo_vector* x, int64_t a, int64_t b, double* re, double* im) {
  if (!m || !x) return null_arg("model/vector");
  return guarded([&] {
    const auto g = m->m.gram(x->v, a, b);
    if (re) *re = g.real();
    if (im) *im = g.imag();
  });
}

ergo_status ergo_model_power_bound(const ergo_model* m, int64_t n_max, double* M, int64_t* argmax) {
  if (!m) return null_arg("model");
  return guarded([&] {
    const auto pb = m->m.power_bound(n_max);
    if (M) *M = pb.M;
    if (argmax) *argmax = pb.argmax;
  });
}

}  // extern "C"
