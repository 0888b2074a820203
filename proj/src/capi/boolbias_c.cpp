#include "boolbias/boolbias.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <span>
#include <string>

#include "boolbias/bounds.hpp"
#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "boolbias/experiment.hpp"
#include "boolbias/prior.hpp"

struct bb_function {
  boolbias::BooleanFunction f;
};
struct bb_dnf {
  boolbias::Dnf d;
};
struct bb_prior {
  boolbias::PriorEstimate est;
};

namespace {

thread_local std::string last_error;

bb_status fail(bb_status status, const char* what) {
  last_error = what;
  return status;
}

// Maps exceptions thrown by fn onto status codes.
template <class Fn>
bb_status guard(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const boolbias::InvalidArgument& e) {
    return fail(BB_INVALID_ARGUMENT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BB_INVALID_ARGUMENT, e.what());
  } catch (const boolbias::BudgetExceeded& e) {
    return fail(BB_BUDGET_EXCEEDED, e.what());
  } catch (const boolbias::IoError& e) {
    return fail(BB_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BB_BUDGET_EXCEEDED, "out of memory");
  } catch (const std::exception& e) {
    return fail(BB_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(BB_INTERNAL_ERROR, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bb_status null_arg() { return fail(BB_INVALID_ARGUMENT, "null argument"); }

}  // namespace

extern "C" {

const char* bb_version(void) { return boolbias::version(); }

const char* bb_last_error(void) { return last_error.c_str(); }

void bb_string_free(char* s) { std::free(s); }

bb_status bb_function_from_string(const char* bits, bb_function** out) {
  if (bits == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = new bb_function{boolbias::BooleanFunction::from_string(bits)};
    return BB_OK;
  });
}

bb_status bb_function_from_hex(const char* hex, int n, bb_function** out) {
  if (hex == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = new bb_function{boolbias::BooleanFunction::from_hex(hex, n)};
    return BB_OK;
  });
}

void bb_function_free(bb_function* f) { delete f; }

int bb_function_n(const bb_function* f) { return f == nullptr ? -1 : f->f.n(); }

bb_status bb_function_to_string(const bb_function* f, char** out) {
  if (f == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = copy_string(f->f.to_string());
    return BB_OK;
  });
}

bb_status bb_function_to_hex(const bb_function* f, char** out) {
  if (f == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = copy_string(f->f.to_hex());
    return BB_OK;
  });
}

bb_status bb_function_eval(const bb_function* f, const uint8_t* inputs, size_t n, int* value) {
  if (f == nullptr || inputs == nullptr || value == nullptr) return null_arg();
  return guard([&] {
    *value = f->f.eval(std::span<const std::uint8_t>(inputs, n)) ? 1 : 0;
    return BB_OK;
  });
}

bb_status bb_complexity_report(const bb_function* f, bb_complexity* out) {
  if (f == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    const auto r = boolbias::complexity_report(f->f);
    *out = bb_complexity{r.n, r.k_dnf, r.k_theta, r.k_clause, r.k_lz};
    return BB_OK;
  });
}

bb_status bb_k_lz(const char* bits, double* out) {
  if (bits == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = boolbias::k_lz(std::string_view(bits));
    return BB_OK;
  });
}

bb_status bb_dnf_min(const bb_function* f, bb_objective objective, int allow_negation,
                     bb_dnf** out) {
  if (f == nullptr || out == nullptr) return null_arg();
  boolbias::Objective obj;
  switch (objective) {
    case BB_OBJECTIVE_LITERALS: obj = boolbias::Objective::Literals; break;
    case BB_OBJECTIVE_CLAUSES: obj = boolbias::Objective::Clauses; break;
    case BB_OBJECTIVE_LITERALS_PLUS_CLAUSES: obj = boolbias::Objective::LiteralsPlusClauses; break;
    default: return fail(BB_INVALID_ARGUMENT, "unknown objective");
  }
  return guard([&] {
    *out = new bb_dnf{boolbias::min_dnf(f->f, obj, allow_negation != 0)};
    return BB_OK;
  });
}

bb_status bb_dnf_parse(const char* text, int n, bb_dnf** out) {
  if (text == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = new bb_dnf{boolbias::parse_dnf(text, n)};
    return BB_OK;
  });
}

bb_status bb_dnf_to_text(const bb_dnf* d, char** out) {
  if (d == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = copy_string(boolbias::to_text(d->d));
    return BB_OK;
  });
}

bb_status bb_dnf_truth_table(const bb_dnf* d, bb_function** out) {
  if (d == nullptr || out == nullptr) return null_arg();
  return guard([&] {
    *out = new bb_function{boolbias::truth_table(d->d)};
    return BB_OK;
  });
}

int bb_dnf_length(const bb_dnf* d) { return d == nullptr ? -1 : boolbias::dnf_length(d->d); }

void bb_dnf_free(bb_dnf* d) { delete d; }

bb_status bb_prior_sample(int n, int alpha_w, uint64_t draws, uint64_t seed, unsigned threads,
                          bb_prior** out) {
  if (out == nullptr) return null_arg();
  return guard([&] {
    boolbias::SampleOptions opts;
    opts.seed = seed;
    opts.threads = threads == 0 ? 1 : threads;
    *out = new bb_prior{boolbias::sample_prior(n, alpha_w, draws, opts)};
    return BB_OK;
  });
}

bb_status bb_prior_exact(int n, int alpha_w, bb_prior** out) {
  if (out == nullptr) return null_arg();
  return guard([&] {
    *out = new bb_prior{boolbias::exact_prior(n, alpha_w)};
    return BB_OK;
  });
}

uint64_t bb_prior_total(const bb_prior* p) { return p == nullptr ? 0 : p->est.total; }

size_t bb_prior_distinct(const bb_prior* p) { return p == nullptr ? 0 : p->est.entries.size(); }

bb_status bb_prior_count(const bb_prior* p, const bb_function* f, uint64_t* out) {
  if (p == nullptr || f == nullptr || out == nullptr) return null_arg();
  if (f->f.n() != p->est.n) return fail(BB_INVALID_ARGUMENT, "function arity differs from prior");
  return guard([&] {
    *out = p->est.count(f->f);
    return BB_OK;
  });
}

void bb_prior_free(bb_prior* p) { delete p; }

bb_status bb_pac_bayes(double p_f, uint64_t m, double delta, double* out) {
  if (out == nullptr) return null_arg();
  return guard([&] {
    *out = boolbias::pac_bayes_bound(p_f, m, delta);
    return BB_OK;
  });
}

bb_status bb_bound_parity(int n, double alpha_w, int k, double* log_lower, double* log_upper) {
  if (log_lower == nullptr || log_upper == nullptr) return null_arg();
  return guard([&] {
    const auto b = boolbias::bound_parity(n, alpha_w, k);
    *log_lower = b.lower.log;
    *log_upper = b.upper.log;
    return BB_OK;
  });
}

bb_status bb_optimal_width(int n, double* out) {
  if (out == nullptr) return null_arg();
  return guard([&] {
    *out = boolbias::optimal_width(n);
    return BB_OK;
  });
}

bb_status bb_run_command(const char* command, const char* config_json, char** result_json) {
  if (command == nullptr || result_json == nullptr) return null_arg();
  *result_json = nullptr;
  return guard([&] {
    const auto config = config_json == nullptr || *config_json == '\0'
                            ? nlohmann::json::object()
                            : nlohmann::json::parse(config_json);
    const auto result = boolbias::run_command(command, config);
    *result_json = copy_string(result.dump(2));
    if (result.value("failed", 0) > 0) {
      last_error = "some runs failed";
      return BB_RUN_FAILED;
    }
    return BB_OK;
  });
}

}  // extern "C"
