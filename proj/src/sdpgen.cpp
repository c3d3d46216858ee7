#include "sdpgen.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace acnum {

void AffineForm::add_term(std::uint32_t var, const Rat& coef) {
  if (coef.is_zero()) return;
  auto it = std::lower_bound(terms.begin(), terms.end(), var,
                             [](const auto& t, std::uint32_t v) { return t.first < v; });
  if (it != terms.end() && it->first == var) {
    it->second = it->second + coef;
    if (it->second.is_zero()) terms.erase(it);
    return;
  }
  terms.insert(it, {var, coef});
}

Rat AffineForm::eval(const std::vector<Rat>& values_by_label) const {
  Rat r = constant;
  for (const auto& [var, coef] : terms) r = r + coef * values_by_label[var];
  return r;
}

bool AffineForm::operator==(const AffineForm& o) const {
  return constant == o.constant && terms == o.terms;
}

bool SdpBlock::operator==(const SdpBlock& o) const {
  if (dim != o.dim) return false;
  if (!(entries[0] == o.entries[0])) return false;
  if (dim == 1) return true;
  return entries[1] == o.entries[1] && entries[2] == o.entries[2];
}

bool SdpProgram::operator==(const SdpProgram& o) const {
  return mode == o.mode && var_labels == o.var_labels && blocks == o.blocks &&
         objective == o.objective && threshold == o.threshold && source_hash == o.source_hash;
}

namespace {

void require_plus_hsq(const Circuit& c) {
  if (c.has_opcode(OpCode::sub) || c.has_opcode(OpCode::mul) || c.has_opcode(OpCode::div))
    throw Error(Errc::invalid_argument, "SDP emission requires a {+, x^2/2} circuit");
}

// x_label as an affine form; node 0 collapses to the constant 1 when
// substituted.
AffineForm var_form(std::uint32_t label, EncodingMode mode, const Rat& scale = Rat(1)) {
  AffineForm f;
  if (label == 0 && mode == EncodingMode::subst_x0) {
    f.constant = scale;
    return f;
  }
  f.add_term(label, scale);
  return f;
}

SdpProgram emit_core(const Circuit& c, EncodingMode mode) {
  require_plus_hsq(c);
  SdpProgram p;
  p.mode = mode;
  p.source_hash = circuit_hash(c);
  if (mode == EncodingMode::keep_x0) p.var_labels.push_back(0);
  for (std::uint32_t i = 1; i <= c.size(); ++i) p.var_labels.push_back(i);

  std::uint32_t node = 1;
  for (const Gate& g : c.gates()) {
    SdpBlock block;
    if (g.op == OpCode::add) {
      block.dim = 1;
      AffineForm f = var_form(node, mode);
      AffineForm lhs = var_form(g.lhs, mode, Rat(-1));
      AffineForm rhs = var_form(g.rhs, mode, Rat(-1));
      f.constant = f.constant + lhs.constant + rhs.constant;
      for (const auto& [v, co] : lhs.terms) f.add_term(v, co);
      for (const auto& [v, co] : rhs.terms) f.add_term(v, co);
      block.entries[0] = std::move(f);
    } else {  // hsq
      block.dim = 2;
      block.entries[0] = var_form(node, mode, Rat(2));
      block.entries[1] = var_form(g.lhs, mode);
      block.entries[2].constant = Rat(1);
    }
    p.blocks.push_back(std::move(block));
    ++node;
  }

  if (mode == EncodingMode::keep_x0) {
    // pins x_0 = 1 as the pair of inequalities x_0 - 1 >= 0, 1 - x_0 >= 0
    SdpBlock pin;
    pin.dim = 2;
    pin.entries[0] = var_form(0, mode);
    pin.entries[0].constant = Rat(-1);
    pin.entries[2] = var_form(0, mode, Rat(-1));
    pin.entries[2].constant = Rat(1);
    p.blocks.push_back(std::move(pin));
  }
  return p;
}

}  // namespace

SdpProgram emit_value_program(const Circuit& c, EncodingMode mode) {
  SdpProgram p = emit_core(c, mode);
  p.objective.assign(p.n_vars(), Rat(0));
  std::uint32_t out_label = static_cast<std::uint32_t>(c.size());
  for (std::size_t col = 0; col < p.var_labels.size(); ++col)
    if (p.var_labels[col] == out_label) p.objective[col] = Rat(1);
  return p;
}

SdpProgram emit_threshold_feasibility(const Circuit& c, const Rat& q, EncodingMode mode) {
  SdpProgram p = emit_core(c, mode);
  p.objective.assign(p.n_vars(), Rat(0));
  p.threshold = q;
  SdpBlock cap;
  cap.dim = 1;
  AffineForm f = var_form(static_cast<std::uint32_t>(c.size()), mode, Rat(-1));
  f.constant = f.constant + q;
  cap.entries[0] = std::move(f);
  p.blocks.push_back(std::move(cap));
  return p;
}

PsdCertificate canonical_certificate(const Circuit& c, const SdpProgram& program) {
  if (program.source_hash != circuit_hash(c))
    throw Error(Errc::invalid_argument, "certificate: program was not emitted from this circuit");
  require_plus_hsq(c);
  std::vector<Rat> values;  // per-node circuit values, the canonical point
  values.reserve(c.size() + 1);
  values.emplace_back(1);
  for (const Gate& g : c.gates()) {
    switch (g.op) {
      case OpCode::add:
        values.push_back(values[g.lhs] + values[g.rhs]);
        break;
      case OpCode::hsq:
        values.push_back(values[g.lhs] * values[g.lhs] * Rat(BigInt(1), BigInt(2)));
        break;
      default:
        throw Error(Errc::internal_error, "unreachable opcode");
    }
  }

  PsdCertificate cert;
  for (std::uint32_t label : program.var_labels) cert.assignment.push_back(values[label]);
  cert.all_psd = true;
  for (const SdpBlock& b : program.blocks) {
    BlockCheck check;
    check.dim = b.dim;
    check.a11 = b.entries[0].eval(values);
    if (b.dim == 1) {
      check.psd = check.a11.sign() >= 0;
    } else {
      check.a12 = b.entries[1].eval(values);
      check.a22 = b.entries[2].eval(values);
      check.det = check.a11 * check.a22 - check.a12 * check.a12;
      check.psd = check.a11.sign() >= 0 && check.a22.sign() >= 0 && check.det.sign() >= 0;
    }
    cert.all_psd = cert.all_psd && check.psd;
    cert.blocks.push_back(std::move(check));
  }
  return cert;
}

bool certify_infeasible(const SdpProgram& program, const Circuit& c, const Rat& q) {
  if (program.source_hash != circuit_hash(c))
    throw Error(Errc::invalid_argument, "certify_infeasible: program/circuit mismatch");
  require_plus_hsq(c);
  std::vector<Rat> lb;
  lb.reserve(c.size() + 1);
  lb.emplace_back(1);
  for (const Gate& g : c.gates()) {
    switch (g.op) {
      case OpCode::add:
        lb.push_back(lb[g.lhs] + lb[g.rhs]);
        break;
      case OpCode::hsq:
        lb.push_back(lb[g.lhs].sign() >= 0 ? lb[g.lhs] * lb[g.lhs] * Rat(BigInt(1), BigInt(2))
                                           : Rat(0));
        break;
      default:
        throw Error(Errc::internal_error, "unreachable opcode");
    }
  }
  return lb.back() > q;
}

namespace {

// Decimal rendering with round-half-up at `precision` fractional digits;
// integer parts print in full. Sets lossy when digits were dropped.
std::string render_decimal(const Rat& r, int precision, bool& lossy) {
  if (r.is_zero()) return "0";
  BigInt n = r.num();
  bool negative = n < 0;
  if (negative) n = -n;
  BigInt d = r.den();
  BigInt ip = n / d;
  BigInt rem = n % d;
  std::string out = ip.get_str();
  if (rem != 0) {
    std::string frac;
    for (int i = 0; i < precision && rem != 0; ++i) {
      rem *= 10;
      BigInt digit = rem / d;
      frac.push_back(static_cast<char>('0' + digit.get_ui()));
      rem %= d;
    }
    if (rem != 0) {
      lossy = true;
      rem *= 10;
      if (rem / d >= 5) {
        // carry through the fractional then integer digits
        int i = static_cast<int>(frac.size()) - 1;
        for (; i >= 0; --i) {
          if (frac[i] != '9') {
            ++frac[i];
            break;
          }
          frac[i] = '0';
        }
        if (i < 0) out = BigInt(ip + 1).get_str();
      }
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
  }
  return negative ? "-" + out : out;
}

const char* mode_name(EncodingMode m) {
  return m == EncodingMode::subst_x0 ? "subst-x0" : "keep-x0";
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string write_sdpa(const SdpProgram& program, int precision) {
  if (precision < 1) throw Error(Errc::invalid_argument, "precision must be >= 1");
  bool lossy = false;
  std::ostringstream body;
  // entries: F_0 holds the negated constants, F_i the coefficient of the
  // i-th variable (column order), per X = sum x_i F_i - F_0 >= 0
  int blkno = 1;
  std::vector<std::size_t> col_of_label;
  {
    std::uint32_t max_label = 0;
    for (std::uint32_t l : program.var_labels) max_label = std::max(max_label, l);
    col_of_label.assign(max_label + 1, 0);
    for (std::size_t col = 0; col < program.var_labels.size(); ++col)
      col_of_label[program.var_labels[col]] = col + 1;  // 1-based matno
  }
  auto emit_entry = [&](int matno, int blk, int i, int j, const Rat& v) {
    if (v.is_zero()) return;
    body << matno << " " << blk << " " << i << " " << j << " "
         << render_decimal(v, precision, lossy) << "\n";
  };
  for (const SdpBlock& b : program.blocks) {
    auto emit_form = [&](const AffineForm& f, int i, int j) {
      emit_entry(0, blkno, i, j, -f.constant);
      for (const auto& [label, coef] : f.terms)
        emit_entry(static_cast<int>(col_of_label[label]), blkno, i, j, coef);
    };
    emit_form(b.entries[0], 1, 1);
    if (b.dim == 2) {
      emit_form(b.entries[1], 1, 2);
      emit_form(b.entries[2], 2, 2);
    }
    ++blkno;
  }

  std::ostringstream out;
  out << "\"acnum sdp; mode=" << mode_name(program.mode) << "; source=" << hash_hex(program.source_hash)
      << "\n";
  if (lossy)
    out << "\"warning: coefficients rounded to " << precision
        << " digits; exact values live in the JSON form\n";
  out << program.n_vars() << "\n";
  out << program.blocks.size() << "\n";
  for (std::size_t i = 0; i < program.blocks.size(); ++i)
    out << (i ? " " : "") << program.blocks[i].dim;
  out << "\n";
  bool obj_lossy = false;
  for (std::size_t i = 0; i < program.objective.size(); ++i)
    out << (i ? " " : "") << render_decimal(program.objective[i], precision, obj_lossy);
  out << "\n";
  out << body.str();
  return out.str();
}

namespace {

nlohmann::json rat_json(const Rat& r) {
  return nlohmann::json::array({r.num().get_str(), r.den().get_str()});
}

Rat rat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error(Errc::parse_error, "expected [num, den] pair");
  return Rat(BigInt(j[0].get<std::string>()), BigInt(j[1].get<std::string>()));
}

nlohmann::json affine_json(const AffineForm& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [var, coef] : f.terms)
    terms.push_back(nlohmann::json::array({var, coef.num().get_str(), coef.den().get_str()}));
  return nlohmann::json{{"const", rat_json(f.constant)}, {"terms", std::move(terms)}};
}

AffineForm affine_from_json(const nlohmann::json& j) {
  AffineForm f;
  f.constant = rat_from_json(j.at("const"));
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 3)
      throw Error(Errc::parse_error, "expected [var, num, den] term");
    f.add_term(t[0].get<std::uint32_t>(),
               Rat(BigInt(t[1].get<std::string>()), BigInt(t[2].get<std::string>())));
  }
  return f;
}

}  // namespace

std::string write_exact_json(const SdpProgram& program) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const SdpBlock& b : program.blocks) {
    nlohmann::json entries = nlohmann::json::array();
    entries.push_back(affine_json(b.entries[0]));
    if (b.dim == 2) {
      entries.push_back(affine_json(b.entries[1]));
      entries.push_back(affine_json(b.entries[2]));
    }
    blocks.push_back(nlohmann::json{{"dim", b.dim}, {"entries", std::move(entries)}});
  }
  nlohmann::json objective = nlohmann::json::array();
  for (const Rat& r : program.objective) objective.push_back(rat_json(r));
  nlohmann::json j{{"format", "acnum-sdp-1"},
                   {"mode", mode_name(program.mode)},
                   {"n_vars", program.n_vars()},
                   {"var_labels", program.var_labels},
                   {"objective", std::move(objective)},
                   {"blocks", std::move(blocks)},
                   {"source_hash", hash_hex(program.source_hash)}};
  if (program.threshold) j["threshold"] = rat_json(*program.threshold);
  return j.dump();
}

SdpProgram read_exact_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "acnum-sdp-1")
    throw Error(Errc::parse_error, "not an acnum-sdp-1 document");
  SdpProgram p;
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "subst-x0")
    p.mode = EncodingMode::subst_x0;
  else if (mode == "keep-x0")
    p.mode = EncodingMode::keep_x0;
  else
    throw Error(Errc::parse_error, "unknown mode '" + mode + "'");
  p.var_labels = j.at("var_labels").get<std::vector<std::uint32_t>>();
  for (const auto& o : j.at("objective")) p.objective.push_back(rat_from_json(o));
  for (const auto& bj : j.at("blocks")) {
    SdpBlock b;
    b.dim = bj.at("dim").get<int>();
    if (b.dim != 1 && b.dim != 2) throw Error(Errc::parse_error, "block dim must be 1 or 2");
    const auto& entries = bj.at("entries");
    if (entries.size() != (b.dim == 1 ? 1u : 3u))
      throw Error(Errc::parse_error, "block entry count does not match dim");
    b.entries[0] = affine_from_json(entries[0]);
    if (b.dim == 2) {
      b.entries[1] = affine_from_json(entries[1]);
      b.entries[2] = affine_from_json(entries[2]);
    }
    p.blocks.push_back(std::move(b));
  }
  if (j.contains("threshold")) p.threshold = rat_from_json(j["threshold"]);
  p.source_hash = std::stoull(j.at("source_hash").get<std::string>(), nullptr, 16);
  return p;
}

SdpaData read_sdpa(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_content = [&](std::string& out) {
    while (std::getline(in, line)) {
      std::size_t i = line.find_first_not_of(" \t");
      if (i == std::string::npos) continue;
      if (line[i] == '"' || line[i] == '*') continue;
      out = line;
      return true;
    }
    return false;
  };
  auto clean = [](std::string s) {
    for (char& ch : s)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    return s;
  };
  SdpaData data{};
  std::string content;
  if (!next_content(content)) throw Error(Errc::parse_error, "missing variable count");
  data.n_vars = std::stoi(content);
  if (!next_content(content)) throw Error(Errc::parse_error, "missing block count");
  data.n_blocks = std::stoi(content);
  if (!next_content(content)) throw Error(Errc::parse_error, "missing block sizes");
  {
    std::istringstream bs(clean(content));
    int v;
    while (bs >> v) data.block_sizes.push_back(v);
  }
  if (!next_content(content)) throw Error(Errc::parse_error, "missing objective");
  {
    std::istringstream obj(clean(content));
    double v;
    while (obj >> v) data.objective.push_back(v);
  }
  while (next_content(content)) {
    std::istringstream es(clean(content));
    SdpaEntry e{};
    if (es >> e.matno >> e.blkno >> e.row >> e.col >> e.value) data.entries.push_back(e);
  }
  return data;
}

}  // namespace acnum
