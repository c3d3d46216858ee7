// acnum command-line driver. Talks to the library exclusively through the
// C API in acnum/acnum.h.
//
// Exit codes: 0/1 carry predicate outcomes (eq: equal/not-equal, cmp:
// geq/lt), 2 marks a promise violation (undefined circuit value), 64 usage
// errors, 66 I/O errors, 70 other tool failures.

#include <acnum/acnum.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitPromise = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 66;
constexpr int kExitSoftware = 70;

struct CircuitDeleter {
  void operator()(acnum_circuit* c) const { acnum_circuit_free(c); }
};
using CircuitPtr = std::unique_ptr<acnum_circuit, CircuitDeleter>;

struct StringDeleter {
  void operator()(char* s) const { acnum_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

int status_exit(acnum_status status) {
  switch (status) {
    case ACNUM_OK:
      return 0;
    case ACNUM_ERR_UNDEFINED:
      return kExitPromise;
    case ACNUM_ERR_IO:
      return kExitIo;
    case ACNUM_ERR_PARSE:
    case ACNUM_ERR_INVALID:
      return kExitUsage;
    default:
      return kExitSoftware;
  }
}

int fail(acnum_status status) {
  std::cerr << "acnum: " << acnum_last_error() << "\n";
  return status_exit(status);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return bool(out);
}

// Format comes from --format when given, else the file extension.
acnum_format detect_format(const std::string& path, const std::string& format_flag) {
  if (format_flag == "json") return ACNUM_FORMAT_JSON;
  if (format_flag == "text") return ACNUM_FORMAT_TEXT;
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) return ACNUM_FORMAT_JSON;
  return ACNUM_FORMAT_TEXT;
}

int load_circuit(const std::string& path, const std::string& format_flag, CircuitPtr& out) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "acnum: cannot read '" << path << "'\n";
    return kExitIo;
  }
  acnum_circuit* c = nullptr;
  acnum_status st = acnum_circuit_parse(text.c_str(), detect_format(path, format_flag), &c);
  if (st != ACNUM_OK) {
    std::cerr << "acnum: " << path << ": " << acnum_last_error() << "\n";
    return status_exit(st);
  }
  out.reset(c);
  return 0;
}

int emit_report(const StringPtr& report, const std::string& json_out) {
  if (json_out.empty() || !report) return 0;
  if (!write_file(json_out, std::string(report.get()) + "\n")) {
    std::cerr << "acnum: cannot write '" << json_out << "'\n";
    return kExitIo;
  }
  return 0;
}

unsigned long long seed_or_env(const CLI::Option* opt, unsigned long long value) {
  if (opt->count() > 0) return value;
  if (const char* env = std::getenv("ACNUM_SEED")) return std::strtoull(env, nullptr, 10);
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rational numbers as straight-line arithmetic circuits", "acnum"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(acnum_version()));

  std::string format_flag;
  app.add_option("--format", format_flag, "circuit file format: text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // ---- eval ----------------------------------------------------------
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a circuit exactly");
  std::string eval_file, eval_mod, eval_json_out;
  cmd_eval->add_option("file", eval_file)->required();
  cmd_eval->add_option("--mod", eval_mod, "evaluate modulo this integer instead");
  cmd_eval->add_option("--json-out", eval_json_out);

  // ---- lower ---------------------------------------------------------
  auto* cmd_lower = app.add_subcommand("lower", "lower a circuit to another basis");
  std::string lower_file, lower_target, lower_json_out, lower_out;
  bool lower_cleanup = false;
  cmd_lower->add_option("file", lower_file)->required();
  cmd_lower->add_option("--to", lower_target, "target basis")
      ->required()
      ->check(CLI::IsMember({"arithmetic", "division-free", "monotone", "plus-hsq"}));
  cmd_lower->add_flag("--cleanup", lower_cleanup, "drop unreferenced gates");
  cmd_lower->add_option("--json-out", lower_json_out, "write the full result + report JSON here");
  cmd_lower->add_option("-o,--out", lower_out, "write the lowered circuit text here");

  // ---- eq ------------------------------------------------------------
  auto* cmd_eq = app.add_subcommand("eq", "randomized equality test");
  std::string eq_a, eq_b, eq_json_out;
  double eq_error = 1e-9;
  unsigned long long eq_seed = 0, eq_rounds = 0;
  bool eq_census = false;
  cmd_eq->add_option("file1", eq_a)->required();
  cmd_eq->add_option("file2", eq_b)->required();
  cmd_eq->add_option("--error", eq_error, "one-sided error target (default 1e-9)");
  auto* eq_seed_opt = cmd_eq->add_option("--seed", eq_seed);
  cmd_eq->add_option("--rounds", eq_rounds, "explicit round count (overrides --error)");
  cmd_eq->add_flag("--census", eq_census, "add the exhaustive detection census to the report");
  cmd_eq->add_option("--json-out", eq_json_out);

  // ---- cmp -----------------------------------------------------------
  auto* cmd_cmp = app.add_subcommand("cmp", "residue-arithmetic comparison (v1 >= v2)");
  std::string cmp_a, cmp_b, cmp_mode = "tight", cmp_json_out;
  bool cmp_strict = false, cmp_trace = false;
  unsigned long long cmp_seed = 0;
  cmd_cmp->add_option("file1", cmp_a)->required();
  cmd_cmp->add_option("file2", cmp_b)->required();
  cmd_cmp->add_option("--mode", cmp_mode)->check(CLI::IsMember({"tight", "paper"}));
  cmd_cmp->add_flag("--strict", cmp_strict, "refine GEQ into GT/EQ with the equality test");
  cmd_cmp->add_flag("--trace", cmp_trace, "embed the residue trace in the report");
  auto* cmp_seed_opt = cmd_cmp->add_option("--seed", cmp_seed);
  cmd_cmp->add_option("--json-out", cmp_json_out);

  // ---- sdp -----------------------------------------------------------
  auto* cmd_sdp = app.add_subcommand("sdp", "emit a semidefinite program for a plus-hsq circuit");
  std::string sdp_file, sdp_threshold, sdp_format = "dat-s", sdp_out, sdp_json_out;
  bool sdp_keep_x0 = false, sdp_certify = false;
  int sdp_precision = 30;
  cmd_sdp->add_option("file", sdp_file)->required();
  cmd_sdp->add_option("--threshold", sdp_threshold,
                      "p/q: emit the feasibility instance for v(c) <= p/q");
  cmd_sdp->add_flag("--keep-x0", sdp_keep_x0, "keep x0 as an explicit pinned variable");
  cmd_sdp->add_option("--sdp-format", sdp_format)->check(CLI::IsMember({"dat-s", "json"}));
  cmd_sdp->add_flag("--certify", sdp_certify, "add an exact certificate to the report");
  cmd_sdp->add_option("--precision", sdp_precision, "decimal digits in dat-s output");
  cmd_sdp->add_option("-o,--out", sdp_out, "write the program here instead of stdout");
  cmd_sdp->add_option("--json-out", sdp_json_out);

  // ---- gen -----------------------------------------------------------
  auto* cmd_gen = app.add_subcommand("gen", "generate a random circuit");
  std::string gen_basis = "arithmetic", gen_weights, gen_json_out;
  int gen_size = 8;
  unsigned long long gen_seed = 0;
  cmd_gen->add_option("--basis", gen_basis)
      ->check(CLI::IsMember({"arithmetic", "division-free", "monotone", "plus-hsq"}));
  cmd_gen->add_option("--size", gen_size)->check(CLI::NonNegativeNumber);
  auto* gen_seed_opt = cmd_gen->add_option("--seed", gen_seed);
  cmd_gen->add_option("--weights", gen_weights, "opcode weights, e.g. add=1,mul=2");
  cmd_gen->add_option("--json-out", gen_json_out);

  // ---- selftest ------------------------------------------------------
  auto* cmd_selftest = app.add_subcommand("selftest", "run the built-in worked vectors");
  std::string selftest_json_out;
  cmd_selftest->add_option("--json-out", selftest_json_out);

  CLI11_PARSE(app, argc, argv);

  // eval
  if (cmd_eval->parsed()) {
    CircuitPtr c;
    if (int rc = load_circuit(eval_file, format_flag, c)) return rc;
    if (!eval_mod.empty()) {
      char* residue = nullptr;
      acnum_status st = acnum_eval_mod(c.get(), eval_mod.c_str(), &residue);
      if (st != ACNUM_OK) return fail(st);
      StringPtr guard(residue);
      std::cout << residue << "\n";
      return 0;
    }
    char* value = nullptr;
    long undefined_gate = -1;
    acnum_status st = acnum_eval_exact(c.get(), &value, &undefined_gate);
    if (st != ACNUM_OK) return fail(st);
    StringPtr guard(value);
    if (!value) {
      std::cout << "undefined at gate " << undefined_gate << "\n";
      return kExitPromise;
    }
    std::cout << value << "\n";
    return 0;
  }

  // lower
  if (cmd_lower->parsed()) {
    CircuitPtr c;
    if (int rc = load_circuit(lower_file, format_flag, c)) return rc;
    acnum_basis target = ACNUM_BASIS_ARITHMETIC;
    if (lower_target == "division-free") target = ACNUM_BASIS_DIVISION_FREE;
    if (lower_target == "monotone") target = ACNUM_BASIS_MONOTONE;
    if (lower_target == "plus-hsq") target = ACNUM_BASIS_PLUS_HSQ;
    char* result = nullptr;
    acnum_status st = acnum_lower(c.get(), target, lower_cleanup ? 1 : 0, &result);
    if (st != ACNUM_OK) return fail(st);
    StringPtr report(result);
    if (int rc = emit_report(report, lower_json_out)) return rc;
    // render the lowered circuit (or pair) as text for human use
    std::string json(result);
    std::cout << json << "\n";
    if (!lower_out.empty() && !write_file(lower_out, json + "\n")) {
      std::cerr << "acnum: cannot write '" << lower_out << "'\n";
      return kExitIo;
    }
    return 0;
  }

  // eq
  if (cmd_eq->parsed()) {
    CircuitPtr a, b;
    if (int rc = load_circuit(eq_a, format_flag, a)) return rc;
    if (int rc = load_circuit(eq_b, format_flag, b)) return rc;
    int equal = 0;
    char* report = nullptr;
    acnum_status st = acnum_eq(a.get(), b.get(), eq_error, seed_or_env(eq_seed_opt, eq_seed),
                               eq_rounds, eq_census ? 1 : 0, &equal, &report);
    if (st != ACNUM_OK) return fail(st);
    StringPtr guard(report);
    if (int rc = emit_report(guard, eq_json_out)) return rc;
    std::cout << (equal ? "equal" : "not-equal") << "\n";
    return equal ? 0 : 1;
  }

  // cmp
  if (cmd_cmp->parsed()) {
    CircuitPtr a, b;
    if (int rc = load_circuit(cmp_a, format_flag, a)) return rc;
    if (int rc = load_circuit(cmp_b, format_flag, b)) return rc;
    int geq = 0;
    char* report = nullptr;
    acnum_status st =
        acnum_cmp(a.get(), b.get(), cmp_mode == "paper" ? ACNUM_MODE_PAPER : ACNUM_MODE_TIGHT,
                  cmp_strict ? 1 : 0, cmp_trace ? 1 : 0, seed_or_env(cmp_seed_opt, cmp_seed),
                  &geq, &report);
    if (st != ACNUM_OK) return fail(st);
    StringPtr guard(report);
    if (int rc = emit_report(guard, cmp_json_out)) return rc;
    std::cout << (geq ? "geq" : "lt") << "\n";
    return geq ? 0 : 1;
  }

  // sdp
  if (cmd_sdp->parsed()) {
    CircuitPtr c;
    if (int rc = load_circuit(sdp_file, format_flag, c)) return rc;
    char* out = nullptr;
    char* report = nullptr;
    acnum_status st = acnum_sdp(c.get(), sdp_threshold.empty() ? nullptr : sdp_threshold.c_str(),
                                sdp_keep_x0 ? 1 : 0,
                                sdp_format == "json" ? ACNUM_FORMAT_JSON : ACNUM_FORMAT_TEXT,
                                sdp_certify ? 1 : 0, sdp_precision, &out, &report);
    if (st != ACNUM_OK) return fail(st);
    StringPtr out_guard(out), report_guard(report);
    if (int rc = emit_report(report_guard, sdp_json_out)) return rc;
    if (!sdp_out.empty()) {
      if (!write_file(sdp_out, out)) {
        std::cerr << "acnum: cannot write '" << sdp_out << "'\n";
        return kExitIo;
      }
    } else {
      std::cout << out;
    }
    return 0;
  }

  // gen
  if (cmd_gen->parsed()) {
    acnum_basis basis = ACNUM_BASIS_ARITHMETIC;
    if (gen_basis == "division-free") basis = ACNUM_BASIS_DIVISION_FREE;
    if (gen_basis == "monotone") basis = ACNUM_BASIS_MONOTONE;
    if (gen_basis == "plus-hsq") basis = ACNUM_BASIS_PLUS_HSQ;
    acnum_circuit* raw = nullptr;
    acnum_status st = acnum_generate(basis, gen_size, seed_or_env(gen_seed_opt, gen_seed),
                                     gen_weights.empty() ? nullptr : gen_weights.c_str(), &raw);
    if (st != ACNUM_OK) return fail(st);
    CircuitPtr c(raw);
    char* text = nullptr;
    st = acnum_circuit_serialize(
        c.get(), format_flag == "json" ? ACNUM_FORMAT_JSON : ACNUM_FORMAT_TEXT, &text);
    if (st != ACNUM_OK) return fail(st);
    StringPtr guard(text);
    std::cout << text;
    if (format_flag == "json") std::cout << "\n";
    return 0;
  }

  // selftest
  if (cmd_selftest->parsed()) {
    int passed = 0;
    char* report = nullptr;
    acnum_status st = acnum_selftest(&passed, &report);
    if (st != ACNUM_OK) return fail(st);
    StringPtr guard(report);
    if (int rc = emit_report(guard, selftest_json_out)) return rc;
    std::cout << (passed ? "selftest passed" : "selftest FAILED") << "\n";
    return passed ? 0 : kExitSoftware;
  }

  return kExitUsage;
}
