#include <doctest.h>

#include <acnum/acnum.h>

#include <string>

namespace {

struct Handle {
  acnum_circuit* c = nullptr;
  ~Handle() { acnum_circuit_free(c); }
};

struct Str {
  char* s = nullptr;
  ~Str() { acnum_string_free(s); }
  std::string view() const { return s ? s : ""; }
};

}  // namespace

TEST_CASE("capi: parse, serialize, basic accessors") {
  Handle h;
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\n", ACNUM_FORMAT_TEXT, &h.c) == ACNUM_OK);
  CHECK(acnum_circuit_size(h.c) == 1);
  CHECK(acnum_circuit_basis(h.c) == ACNUM_BASIS_MONOTONE);
  Str text;
  REQUIRE(acnum_circuit_serialize(h.c, ACNUM_FORMAT_TEXT, &text.s) == ACNUM_OK);
  CHECK(text.view() == "basis monotone\nv1 = add v0 v0\n");
}

TEST_CASE("capi: parse failures set the thread-local message") {
  acnum_circuit* c = nullptr;
  CHECK(acnum_circuit_parse("v1 = frob v0 v0\n", ACNUM_FORMAT_TEXT, &c) == ACNUM_ERR_PARSE);
  CHECK(std::string(acnum_last_error()).find("unknown opcode") != std::string::npos);
  CHECK(acnum_circuit_parse(nullptr, ACNUM_FORMAT_TEXT, &c) == ACNUM_ERR_INVALID);
}

TEST_CASE("capi: exact and modular evaluation") {
  Handle h;
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\nv2 = add v1 v0\nv3 = div v2 v1\n",
                              ACNUM_FORMAT_TEXT, &h.c) == ACNUM_OK);
  Str value;
  long gate = -2;
  REQUIRE(acnum_eval_exact(h.c, &value.s, &gate) == ACNUM_OK);
  CHECK(gate == -1);
  CHECK(value.view() == "3/2");

  Handle undef;
  REQUIRE(acnum_circuit_parse("v1 = sub v0 v0\nv2 = div v0 v1\n", ACNUM_FORMAT_TEXT,
                              &undef.c) == ACNUM_OK);
  Str none;
  REQUIRE(acnum_eval_exact(undef.c, &none.s, &gate) == ACNUM_OK);
  CHECK(none.s == nullptr);
  CHECK(gate == 2);

  Handle squaring;
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\nv2 = mul v1 v1\nv3 = mul v2 v2\nv4 = mul v3 v3\n",
                              ACNUM_FORMAT_TEXT, &squaring.c) == ACNUM_OK);
  Str residue;
  REQUIRE(acnum_eval_mod(squaring.c, "7", &residue.s) == ACNUM_OK);
  CHECK(residue.view() == "4");
  Str bad;
  CHECK(acnum_eval_mod(squaring.c, "seven", &bad.s) == ACNUM_ERR_PARSE);
}

TEST_CASE("capi: eq and cmp verdicts with reports") {
  Handle four, two;
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\nv2 = mul v1 v1\n", ACNUM_FORMAT_TEXT,
                              &four.c) == ACNUM_OK);
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\nv2 = mul v1 v0\n", ACNUM_FORMAT_TEXT,
                              &two.c) == ACNUM_OK);

  int equal = -1;
  Str eq_report;
  REQUIRE(acnum_eq(four.c, two.c, 1e-9, 7, 0, 1, &equal, &eq_report.s) == ACNUM_OK);
  CHECK(equal == 0);
  CHECK(eq_report.view().find("\"witness\"") != std::string::npos);
  CHECK(eq_report.view().find("\"census\"") != std::string::npos);
  CHECK(eq_report.view().find("\"detections\":14") != std::string::npos);

  int geq = -1;
  Str cmp_report;
  REQUIRE(acnum_cmp(four.c, two.c, ACNUM_MODE_TIGHT, 1, 1, 7, &geq, &cmp_report.s) == ACNUM_OK);
  CHECK(geq == 1);
  CHECK(cmp_report.view().find("\"geq\":true") != std::string::npos);
  CHECK(cmp_report.view().find("\"refined\":\"GT\"") != std::string::npos);
  CHECK(cmp_report.view().find("\"trace\"") != std::string::npos);

  // byte-identical reports across runs with the same seed
  Str eq_report2;
  int equal2 = -1;
  REQUIRE(acnum_eq(four.c, two.c, 1e-9, 7, 0, 1, &equal2, &eq_report2.s) == ACNUM_OK);
  CHECK(eq_report.view() == eq_report2.view());
}

TEST_CASE("capi: promise violations map to ACNUM_ERR_UNDEFINED") {
  Handle undef, one;
  REQUIRE(acnum_circuit_parse("v1 = sub v0 v0\nv2 = div v0 v1\n", ACNUM_FORMAT_TEXT,
                              &undef.c) == ACNUM_OK);
  REQUIRE(acnum_circuit_parse("", ACNUM_FORMAT_TEXT, &one.c) == ACNUM_OK);
  int out = -1;
  CHECK(acnum_eq(undef.c, one.c, 1e-9, 0, 0, 0, &out, nullptr) == ACNUM_ERR_UNDEFINED);
  CHECK(acnum_cmp(undef.c, one.c, ACNUM_MODE_TIGHT, 0, 0, 0, &out, nullptr) ==
        ACNUM_ERR_UNDEFINED);
}

TEST_CASE("capi: lowering result embeds circuit or pair plus reports") {
  Handle c;
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\nv2 = add v1 v0\nv3 = div v2 v1\n",
                              ACNUM_FORMAT_TEXT, &c.c) == ACNUM_OK);
  Str result;
  REQUIRE(acnum_lower(c.c, ACNUM_BASIS_DIVISION_FREE, 0, &result.s) == ACNUM_OK);
  CHECK(result.view().find("\"circuit\"") != std::string::npos);
  CHECK(result.view().find("\"pass\":\"drop-division\"") != std::string::npos);
  Str pair;
  REQUIRE(acnum_lower(c.c, ACNUM_BASIS_MONOTONE, 1, &pair.s) == ACNUM_OK);
  CHECK(pair.view().find("\"pair\"") != std::string::npos);
  CHECK(pair.view().find("\"pos_out\"") != std::string::npos);
}

TEST_CASE("capi: sdp emission with certificate") {
  Handle c;
  REQUIRE(acnum_circuit_parse("v1 = add v0 v0\n", ACNUM_FORMAT_TEXT, &c.c) == ACNUM_OK);
  Str out, report;
  REQUIRE(acnum_sdp(c.c, "199/100", 0, ACNUM_FORMAT_TEXT, 1, 30, &out.s, &report.s) ==
          ACNUM_OK);
  CHECK(out.view().find("0 1 1 1 2") != std::string::npos);
  CHECK(report.view().find("\"infeasible\":true") != std::string::npos);
  Str json_out;
  REQUIRE(acnum_sdp(c.c, nullptr, 0, ACNUM_FORMAT_JSON, 0, 30, &json_out.s, nullptr) ==
          ACNUM_OK);
  CHECK(json_out.view().find("acnum-sdp-1") != std::string::npos);
}

TEST_CASE("capi: generator determinism and weights parsing") {
  Handle a, b;
  REQUIRE(acnum_generate(ACNUM_BASIS_MONOTONE, 6, 42, nullptr, &a.c) == ACNUM_OK);
  REQUIRE(acnum_generate(ACNUM_BASIS_MONOTONE, 6, 42, nullptr, &b.c) == ACNUM_OK);
  Str sa, sb;
  REQUIRE(acnum_circuit_serialize(a.c, ACNUM_FORMAT_TEXT, &sa.s) == ACNUM_OK);
  REQUIRE(acnum_circuit_serialize(b.c, ACNUM_FORMAT_TEXT, &sb.s) == ACNUM_OK);
  CHECK(sa.view() == sb.view());
  Handle weighted;
  REQUIRE(acnum_generate(ACNUM_BASIS_MONOTONE, 5, 1, "add=1", &weighted.c) == ACNUM_OK);
  Str sw;
  REQUIRE(acnum_circuit_serialize(weighted.c, ACNUM_FORMAT_TEXT, &sw.s) == ACNUM_OK);
  CHECK(sw.view().find("mul") == std::string::npos);
  acnum_circuit* bad = nullptr;
  CHECK(acnum_generate(ACNUM_BASIS_MONOTONE, 5, 1, "add-1", &bad) == ACNUM_ERR_PARSE);
}

TEST_CASE("capi: selftest passes") {
  int passed = 0;
  Str report;
  REQUIRE(acnum_selftest(&passed, &report.s) == ACNUM_OK);
  CHECK(passed == 1);
  CHECK(report.view().find("\"passed\":true") != std::string::npos);
}
