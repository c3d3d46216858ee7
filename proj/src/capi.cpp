// extern "C" surface of the shared library. All reports are JSON built
// here so that every consumer (CLI included) sees byte-identical output
// for identical inputs and seeds.

#include "acnum/acnum.h"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>

#include "circuit.hpp"
#include "eqcheck.hpp"
#include "gen.hpp"
#include "lowering.hpp"
#include "numeric.hpp"
#include "sdpgen.hpp"
#include "selftest.hpp"
#include "signcheck.hpp"

using namespace acnum;
using nlohmann::json;

struct acnum_circuit {
  Circuit value;
};

namespace {

thread_local std::string t_last_error;

acnum_status to_status(Errc code) {
  switch (code) {
    case Errc::parse_error:
      return ACNUM_ERR_PARSE;
    case Errc::invalid_argument:
      return ACNUM_ERR_INVALID;
    case Errc::undefined_value:
      return ACNUM_ERR_UNDEFINED;
    case Errc::unsupported:
      return ACNUM_ERR_UNSUPPORTED;
    case Errc::budget_exceeded:
      return ACNUM_ERR_BUDGET;
    case Errc::internal_error:
      return ACNUM_ERR_INTERNAL;
    case Errc::io_error:
      return ACNUM_ERR_IO;
  }
  return ACNUM_ERR_INTERNAL;
}

template <typename Fn>
acnum_status guarded(Fn&& fn) {
  try {
    fn();
    return ACNUM_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return ACNUM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

acnum_status invalid(const char* msg) {
  t_last_error = msg;
  return ACNUM_ERR_INVALID;
}

BasisId to_basis(acnum_basis b) {
  switch (b) {
    case ACNUM_BASIS_ARITHMETIC:
      return BasisId::arithmetic;
    case ACNUM_BASIS_DIVISION_FREE:
      return BasisId::division_free;
    case ACNUM_BASIS_MONOTONE:
      return BasisId::monotone;
    case ACNUM_BASIS_PLUS_HSQ:
      return BasisId::plus_hsq;
  }
  throw Error(Errc::invalid_argument, "unknown basis id");
}

json circuit_json(const Circuit& c) {
  return json::parse(serialize_circuit(c, WireFormat::json));
}

json report_json_reports(const std::vector<LoweringReport>& reports) {
  json out = json::array();
  for (const auto& r : reports)
    out.push_back(json{{"pass", r.pass_name},
                       {"input_size", r.input_size},
                       {"output_size", r.output_size},
                       {"expansion_factor", r.expansion_factor.str()}});
  return out;
}

}  // namespace

extern "C" {

const char* acnum_version(void) { return "0.1.0"; }

const char* acnum_last_error(void) { return t_last_error.c_str(); }

void acnum_string_free(char* s) { std::free(s); }

void acnum_circuit_free(acnum_circuit* c) { delete c; }

acnum_status acnum_circuit_parse(const char* text, acnum_format format, acnum_circuit** out) {
  if (!text || !out) return invalid("parse: null argument");
  return guarded([&] {
    Circuit c = parse_circuit(text, format == ACNUM_FORMAT_JSON ? WireFormat::json : WireFormat::text);
    *out = new acnum_circuit{std::move(c)};
  });
}

acnum_status acnum_circuit_serialize(const acnum_circuit* c, acnum_format format, char** out) {
  if (!c || !out) return invalid("serialize: null argument");
  return guarded([&] {
    *out = dup_string(
        serialize_circuit(c->value, format == ACNUM_FORMAT_JSON ? WireFormat::json : WireFormat::text));
  });
}

int acnum_circuit_size(const acnum_circuit* c) {
  return c ? static_cast<int>(c->value.size()) : -1;
}

acnum_basis acnum_circuit_basis(const acnum_circuit* c) {
  if (!c) return ACNUM_BASIS_ARITHMETIC;
  switch (c->value.basis()) {
    case BasisId::arithmetic:
      return ACNUM_BASIS_ARITHMETIC;
    case BasisId::division_free:
      return ACNUM_BASIS_DIVISION_FREE;
    case BasisId::monotone:
      return ACNUM_BASIS_MONOTONE;
    case BasisId::plus_hsq:
      return ACNUM_BASIS_PLUS_HSQ;
  }
  return ACNUM_BASIS_ARITHMETIC;
}

acnum_status acnum_eval_exact(const acnum_circuit* c, char** value, long* undefined_gate) {
  if (!c || !value || !undefined_gate) return invalid("eval: null argument");
  return guarded([&] {
    EvalOutcome out = eval_exact(c->value);
    if (out.defined()) {
      *value = dup_string(out.get().str());
      *undefined_gate = -1;
    } else {
      *value = nullptr;
      *undefined_gate = static_cast<long>(out.undefined_gate());
    }
  });
}

acnum_status acnum_eval_mod(const acnum_circuit* c, const char* modulus, char** residue) {
  if (!c || !modulus || !residue) return invalid("eval_mod: null argument");
  return guarded([&] {
    BigInt m;
    try {
      m = BigInt(std::string(modulus));
    } catch (const std::invalid_argument&) {
      throw Error(Errc::parse_error, "malformed modulus '" + std::string(modulus) + "'");
    }
    *residue = dup_string(eval_mod(c->value, m).get_str());
  });
}

acnum_status acnum_lower(const acnum_circuit* c, acnum_basis target, int cleanup,
                         char** result_json) {
  if (!c || !result_json) return invalid("lower: null argument");
  return guarded([&] {
    LowerResult r = lower_to(c->value, to_basis(target), cleanup != 0);
    json out{{"command", "lower"},
             {"target", std::string(to_string(to_basis(target)))},
             {"cleanup", cleanup != 0},
             {"reports", report_json_reports(r.reports)}};
    if (r.circuit) out["circuit"] = circuit_json(*r.circuit);
    if (r.pair)
      out["pair"] = json{{"program", circuit_json(r.pair->program)},
                         {"pos_out", r.pair->pos_out},
                         {"neg_out", r.pair->neg_out}};
    *result_json = dup_string(out.dump());
  });
}

acnum_status acnum_eq(const acnum_circuit* s1, const acnum_circuit* s2, double target_error,
                      unsigned long long seed, unsigned long long rounds, int with_census,
                      int* equal, char** report_json) {
  if (!s1 || !s2 || !equal) return invalid("eq: null argument");
  return guarded([&] {
    EqOptions options;
    options.seed = seed;
    options.target_error = target_error;
    if (rounds > 0) options.rounds = rounds;
    EqVerdict v = eq_test(s1->value, s2->value, options);
    *equal = v.outcome == EqOutcome::equal ? 1 : 0;
    if (!report_json) return;
    json rep{{"command", "eq"},
             {"equal", v.outcome == EqOutcome::equal},
             {"rounds_run", v.rounds_run},
             {"rounds_planned", v.params.rounds},
             {"bound_bits", 2 * v.params.lowered_size},
             {"lowered_size", v.params.lowered_size},
             {"seed", std::to_string(seed)},
             {"error_bound", v.error_bound}};
    if (v.witness) rep["witness"] = v.witness->get_str();
    if (with_census) {
      try {
        CensusResult census = detection_census(s1->value, s2->value);
        rep["census"] = json{{"detections", census.detections},
                             {"moduli", census.total},
                             {"fraction", census.fraction.str()}};
      } catch (const Error& e) {
        if (e.code() != Errc::invalid_argument) throw;  // census needs unequal values
        rep["census"] = json{{"skipped", e.what()}};
      }
    }
    *report_json = dup_string(rep.dump());
  });
}

acnum_status acnum_cmp(const acnum_circuit* s1, const acnum_circuit* s2, acnum_prime_mode mode,
                       int strict, int trace, unsigned long long seed, int* geq,
                       char** report_json) {
  if (!s1 || !s2 || !geq) return invalid("cmp: null argument");
  return guarded([&] {
    PrimeMode pm = mode == ACNUM_MODE_PAPER ? PrimeMode::paper : PrimeMode::tight;
    CmpTrace trace_data;
    CmpResult r = compare(s1->value, s2->value, pm, trace ? &trace_data : nullptr);
    *geq = r.outcome == CmpOutcome::geq ? 1 : 0;
    if (!report_json) return;
    json rep{{"command", "cmp"},
             {"geq", r.outcome == CmpOutcome::geq},
             {"mode", pm == PrimeMode::paper ? "paper" : "tight"},
             {"lowered_size", r.lowered_size},
             {"basis_primes", r.basis_primes},
             {"basis_log2_m", r.basis_log2_m},
             {"k_star", r.verdict.shift_used},
             {"branch", r.verdict.branch == SignBranch::parity ? "parity" : "shifted"}};
    if (r.verdict.branch == SignBranch::parity)
      rep["parities"] = json::array({r.verdict.value_parity, r.verdict.reduced_parity});
    else
      rep["shifted_parity"] = r.verdict.reduced_parity;
    if (trace)
      rep["trace"] = json{{"primes", trace_data.primes},
                          {"units", trace_data.units},
                          {"estimate_units", trace_data.estimate_units},
                          {"frac_bits", trace_data.frac_bits}};
    if (strict && r.outcome == CmpOutcome::geq) {
      EqOptions eq_options;
      eq_options.seed = seed;
      eq_options.target_error = std::ldexp(1.0, -40);
      EqVerdict ev = eq_test(s1->value, s2->value, eq_options);
      rep["strict"] = json{{"refined", ev.outcome == EqOutcome::equal ? "EQ" : "GT"},
                           {"eq_rounds", ev.rounds_run},
                           {"eq_error_bound", ev.error_bound}};
    }
    *report_json = dup_string(rep.dump());
  });
}

acnum_status acnum_sdp(const acnum_circuit* c, const char* threshold, int keep_x0,
                       acnum_format format, int certify, int precision, char** out,
                       char** report_json) {
  if (!c || !out) return invalid("sdp: null argument");
  return guarded([&] {
    EncodingMode mode = keep_x0 ? EncodingMode::keep_x0 : EncodingMode::subst_x0;
    SdpProgram program;
    std::optional<Rat> q;
    if (threshold) {
      q = Rat::from_string(threshold);
      program = emit_threshold_feasibility(c->value, *q, mode);
    } else {
      program = emit_value_program(c->value, mode);
    }
    *out = dup_string(format == ACNUM_FORMAT_JSON ? write_exact_json(program)
                                                  : write_sdpa(program, precision > 0 ? precision : 30));
    if (!report_json) return;
    json rep{{"command", "sdp"},
             {"mode", mode == EncodingMode::keep_x0 ? "keep-x0" : "subst-x0"},
             {"n_vars", program.n_vars()},
             {"n_blocks", program.blocks.size()}};
    if (q) rep["threshold"] = q->str();
    if (certify) {
      if (q && certify_infeasible(program, c->value, *q)) {
        rep["certificate"] = json{{"infeasible", true}, {"all_psd", false}};
      } else {
        PsdCertificate cert = canonical_certificate(c->value, program);
        json blocks = json::array();
        for (const auto& b : cert.blocks) {
          json bj{{"dim", b.dim}, {"psd", b.psd}, {"a11", b.a11.str()}};
          if (b.dim == 2) {
            bj["a12"] = b.a12.str();
            bj["a22"] = b.a22.str();
            bj["det"] = b.det.str();
          }
          blocks.push_back(std::move(bj));
        }
        json assignment = json::array();
        for (const auto& v : cert.assignment) assignment.push_back(v.str());
        rep["certificate"] = json{{"infeasible", false},
                                  {"all_psd", cert.all_psd},
                                  {"assignment", std::move(assignment)},
                                  {"blocks", std::move(blocks)}};
      }
    }
    *report_json = dup_string(rep.dump());
  });
}

acnum_status acnum_generate(acnum_basis basis, int size, unsigned long long seed,
                            const char* weights, acnum_circuit** out) {
  if (!out || size < 0) return invalid("generate: bad argument");
  return guarded([&] {
    GenSpec spec;
    spec.basis = to_basis(basis);
    spec.size = static_cast<std::uint32_t>(size);
    spec.seed = seed;
    if (weights && *weights) {
      std::string_view w(weights);
      std::size_t pos = 0;
      while (pos < w.size()) {
        std::size_t comma = w.find(',', pos);
        if (comma == std::string_view::npos) comma = w.size();
        std::string_view item = w.substr(pos, comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
          throw Error(Errc::parse_error, "weights must look like 'add=1,mul=2'");
        auto op = opcode_from_string(item.substr(0, eq));
        if (!op) throw Error(Errc::parse_error, "unknown opcode in weights");
        spec.weights[*op] = std::stod(std::string(item.substr(eq + 1)));
        pos = comma + 1;
      }
    }
    *out = new acnum_circuit{generate(spec)};
  });
}

acnum_status acnum_selftest(int* passed, char** report_json) {
  if (!passed) return invalid("selftest: null argument");
  return guarded([&] {
    SelftestResult r = run_selftest();
    *passed = r.passed ? 1 : 0;
    if (!report_json) return;
    json checks = json::array();
    for (const auto& [label, ok] : r.checks) checks.push_back(json{{"label", label}, {"ok", ok}});
    json rep{{"command", "selftest"}, {"passed", r.passed}, {"checks", std::move(checks)}};
    *report_json = dup_string(rep.dump());
  });
}

}  // extern "C"
