#include "circuit.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace acnum {

bool opcode_admissible(BasisId basis, OpCode op) {
  switch (op) {
    case OpCode::add:
      return true;
    case OpCode::sub:
      return basis == BasisId::arithmetic || basis == BasisId::division_free;
    case OpCode::mul:
      return basis != BasisId::plus_hsq;
    case OpCode::div:
      return basis == BasisId::arithmetic;
    case OpCode::hsq:
      return basis == BasisId::plus_hsq;
  }
  return false;
}

bool opcode_is_unary(OpCode op) { return op == OpCode::hsq; }

std::string_view to_string(BasisId basis) {
  switch (basis) {
    case BasisId::arithmetic:
      return "arithmetic";
    case BasisId::division_free:
      return "division-free";
    case BasisId::monotone:
      return "monotone";
    case BasisId::plus_hsq:
      return "plus-hsq";
  }
  return "?";
}

std::string_view to_string(OpCode op) {
  switch (op) {
    case OpCode::add:
      return "add";
    case OpCode::sub:
      return "sub";
    case OpCode::mul:
      return "mul";
    case OpCode::div:
      return "div";
    case OpCode::hsq:
      return "hsq";
  }
  return "?";
}

std::optional<BasisId> basis_from_string(std::string_view name) {
  if (name == "arithmetic") return BasisId::arithmetic;
  if (name == "division-free") return BasisId::division_free;
  if (name == "monotone") return BasisId::monotone;
  if (name == "plus-hsq") return BasisId::plus_hsq;
  return std::nullopt;
}

std::optional<OpCode> opcode_from_string(std::string_view name) {
  if (name == "add") return OpCode::add;
  if (name == "sub") return OpCode::sub;
  if (name == "mul") return OpCode::mul;
  if (name == "div") return OpCode::div;
  if (name == "hsq") return OpCode::hsq;
  return std::nullopt;
}

Circuit::Circuit(BasisId basis, std::vector<Gate> gates) : basis_(basis), gates_(std::move(gates)) {
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    std::uint32_t node = static_cast<std::uint32_t>(i + 1);
    if (!opcode_admissible(basis_, g.op))
      throw Error(Errc::invalid_argument, "opcode '" + std::string(to_string(g.op)) +
                                              "' not admissible in basis '" +
                                              std::string(to_string(basis_)) + "'");
    if (g.lhs >= node || (!opcode_is_unary(g.op) && g.rhs >= node))
      throw Error(Errc::invalid_argument,
                  "gate v" + std::to_string(node) + " references a node not strictly before it");
  }
}

bool Circuit::has_opcode(OpCode op) const {
  return std::any_of(gates_.begin(), gates_.end(), [op](const Gate& g) { return g.op == op; });
}

BasisId minimal_basis(std::span<const Gate> gates) {
  bool has_hsq = false, has_div = false, has_sub = false, has_mul = false;
  for (const Gate& g : gates) {
    has_hsq |= g.op == OpCode::hsq;
    has_div |= g.op == OpCode::div;
    has_sub |= g.op == OpCode::sub;
    has_mul |= g.op == OpCode::mul;
  }
  if (has_hsq) {
    if (has_div || has_sub || has_mul)
      throw Error(Errc::parse_error, "no basis admits hsq together with sub/mul/div");
    return BasisId::plus_hsq;
  }
  if (has_div) return BasisId::arithmetic;
  if (has_sub) return BasisId::division_free;
  return BasisId::monotone;
}

namespace {

struct TextCursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;

  bool next_line(std::string_view& out) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out = text.substr(pos, end - pos);
    pos = end + 1;
    return true;
  }
};

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
  throw Error(Errc::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

struct Token {
  std::string_view text;
  int col;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;  // comment to end of line
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    toks.push_back({line.substr(start, i - start), static_cast<int>(start + 1)});
  }
  return toks;
}

// "v<k>" -> k
std::uint32_t parse_node_ref(const Token& tok, int line) {
  std::string_view t = tok.text;
  if (t.size() < 2 || t[0] != 'v') parse_fail(line, tok.col, "expected node reference 'v<k>'");
  std::uint64_t value = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i])))
      parse_fail(line, tok.col, "expected node reference 'v<k>'");
    value = value * 10 + static_cast<std::uint64_t>(t[i] - '0');
    if (value > UINT32_MAX) parse_fail(line, tok.col, "node index out of range");
  }
  return static_cast<std::uint32_t>(value);
}

Circuit parse_text(std::string_view text) {
  TextCursor cur{text};
  std::optional<BasisId> declared;
  std::vector<Gate> gates;
  std::string_view raw;
  while (cur.next_line(raw)) {
    int line = cur.line++;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    if (toks[0].text == "basis") {
      if (!gates.empty()) parse_fail(line, toks[0].col, "basis header must precede all gates");
      if (declared) parse_fail(line, toks[0].col, "duplicate basis header");
      if (toks.size() != 2) parse_fail(line, toks[0].col, "expected 'basis <name>'");
      auto b = basis_from_string(toks[1].text);
      if (!b) parse_fail(line, toks[1].col, "unknown basis '" + std::string(toks[1].text) + "'");
      declared = *b;
      continue;
    }
    // v<i> = <op> v<j> [v<k>]
    if (toks.size() < 4) parse_fail(line, toks[0].col, "expected 'v<i> = <op> v<j> [v<k>]'");
    std::uint32_t index = parse_node_ref(toks[0], line);
    std::uint32_t expected = static_cast<std::uint32_t>(gates.size() + 1);
    if (index != expected)
      parse_fail(line, toks[0].col,
                 "gate indices must be consecutive from 1 (expected v" + std::to_string(expected) + ")");
    if (toks[1].text != "=") parse_fail(line, toks[1].col, "expected '='");
    auto op = opcode_from_string(toks[2].text);
    if (!op) parse_fail(line, toks[2].col, "unknown opcode '" + std::string(toks[2].text) + "'");
    std::size_t want = opcode_is_unary(*op) ? 4 : 5;
    if (toks.size() != want)
      parse_fail(line, toks[2].col, std::string(to_string(*op)) +
                                        (opcode_is_unary(*op) ? " takes one operand" : " takes two operands"));
    Gate g{*op, parse_node_ref(toks[3], line), 0};
    if (!opcode_is_unary(*op)) g.rhs = parse_node_ref(toks[4], line);
    if (g.lhs >= index) parse_fail(line, toks[3].col, "forward reference v" + std::to_string(g.lhs));
    if (!opcode_is_unary(*op) && g.rhs >= index)
      parse_fail(line, toks[4].col, "forward reference v" + std::to_string(g.rhs));
    if (declared && !opcode_admissible(*declared, *op))
      parse_fail(line, toks[2].col, "opcode '" + std::string(to_string(*op)) +
                                        "' not in declared basis '" + std::string(to_string(*declared)) + "'");
    gates.push_back(g);
  }
  BasisId basis = declared ? *declared : minimal_basis(gates);
  return Circuit(basis, std::move(gates));
}

Circuit parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("gates") || !j["gates"].is_array())
    throw Error(Errc::parse_error, "expected an object with a 'gates' array");
  std::vector<Gate> gates;
  for (const auto& item : j["gates"]) {
    if (!item.is_object() || !item.contains("op") || !item.contains("lhs"))
      throw Error(Errc::parse_error, "gate entries need 'op' and 'lhs'");
    auto op = opcode_from_string(item["op"].get<std::string>());
    if (!op) throw Error(Errc::parse_error, "unknown opcode '" + item["op"].get<std::string>() + "'");
    Gate g{*op, item["lhs"].get<std::uint32_t>(), 0};
    if (!opcode_is_unary(*op)) {
      if (!item.contains("rhs")) throw Error(Errc::parse_error, "binary gate without 'rhs'");
      g.rhs = item["rhs"].get<std::uint32_t>();
    }
    gates.push_back(g);
  }
  std::optional<BasisId> declared;
  if (j.contains("basis")) {
    declared = basis_from_string(j["basis"].get<std::string>());
    if (!declared) throw Error(Errc::parse_error, "unknown basis '" + j["basis"].get<std::string>() + "'");
  }
  BasisId basis = declared ? *declared : minimal_basis(gates);
  try {
    return Circuit(basis, std::move(gates));
  } catch (const Error& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

}  // namespace

Circuit parse_circuit(std::string_view text, WireFormat format) {
  return format == WireFormat::text ? parse_text(text) : parse_json(text);
}

std::string serialize_circuit(const Circuit& c, WireFormat format) {
  if (format == WireFormat::text) {
    std::ostringstream out;
    out << "basis " << to_string(c.basis()) << "\n";
    std::uint32_t index = 1;
    for (const Gate& g : c.gates()) {
      out << "v" << index << " = " << to_string(g.op) << " v" << g.lhs;
      if (!opcode_is_unary(g.op)) out << " v" << g.rhs;
      out << "\n";
      ++index;
    }
    return out.str();
  }
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : c.gates()) {
    nlohmann::json item{{"op", std::string(to_string(g.op))}, {"lhs", g.lhs}};
    if (!opcode_is_unary(g.op)) item["rhs"] = g.rhs;
    gates.push_back(std::move(item));
  }
  nlohmann::json j{{"basis", std::string(to_string(c.basis()))}, {"gates", std::move(gates)}};
  return j.dump();
}

const Rat& EvalOutcome::get() const {
  if (!defined_) throw Error(Errc::undefined_value, "circuit value is undefined");
  return value_;
}

std::uint32_t EvalOutcome::undefined_gate() const {
  if (defined_) throw Error(Errc::invalid_argument, "outcome is a defined value");
  return gate_;
}

EvalOutcome eval_exact(const Circuit& c) {
  std::vector<Rat> values;
  values.reserve(c.size() + 1);
  values.emplace_back(1);
  std::uint32_t node = 1;
  for (const Gate& g : c.gates()) {
    const Rat& a = values[g.lhs];
    switch (g.op) {
      case OpCode::add:
        values.push_back(a + values[g.rhs]);
        break;
      case OpCode::sub:
        values.push_back(a - values[g.rhs]);
        break;
      case OpCode::mul:
        values.push_back(a * values[g.rhs]);
        break;
      case OpCode::div:
        if (values[g.rhs].is_zero()) return EvalOutcome::undefined(node);
        values.push_back(a / values[g.rhs]);
        break;
      case OpCode::hsq:
        values.push_back(a * a * Rat(BigInt(1), BigInt(2)));
        break;
    }
    ++node;
  }
  return EvalOutcome::value(values.back());
}

namespace {

void require_integer_ops(const Circuit& c) {
  if (c.has_opcode(OpCode::div))
    throw Error(Errc::invalid_argument, "modular evaluation requires a division-free circuit");
  if (c.has_opcode(OpCode::hsq))
    throw Error(Errc::invalid_argument, "modular evaluation requires integer-valued gates (no hsq)");
}

}  // namespace

BigInt eval_mod(const Circuit& c, const BigInt& modulus) {
  if (modulus < 1) throw Error(Errc::invalid_argument, "modulus must be >= 1");
  require_integer_ops(c);
  if (modulus == 1) return BigInt(0);
  std::vector<BigInt> values;
  values.reserve(c.size() + 1);
  values.emplace_back(1);
  BigInt t;
  for (const Gate& g : c.gates()) {
    switch (g.op) {
      case OpCode::add:
        t = values[g.lhs] + values[g.rhs];
        break;
      case OpCode::sub:
        t = values[g.lhs] - values[g.rhs];
        break;
      case OpCode::mul:
        t = values[g.lhs] * values[g.rhs];
        break;
      default:
        throw Error(Errc::internal_error, "unreachable opcode");
    }
    BigInt r;
    mpz_mod(r.get_mpz_t(), t.get_mpz_t(), modulus.get_mpz_t());  // least non-negative
    values.push_back(std::move(r));
  }
  return values.back();
}

std::uint64_t eval_mod_u64(const Circuit& c, std::uint64_t modulus) {
  if (modulus == 0) throw Error(Errc::invalid_argument, "modulus must be >= 1");
  require_integer_ops(c);
  if (modulus == 1) return 0;
  if (modulus > (1ull << 63))
    throw Error(Errc::invalid_argument, "modulus too large for the 64-bit evaluator");
  std::vector<std::uint64_t> values;
  values.reserve(c.size() + 1);
  values.push_back(1 % modulus);
  for (const Gate& g : c.gates()) {
    std::uint64_t a = values[g.lhs], b = values[g.rhs];
    std::uint64_t r = 0;
    switch (g.op) {
      case OpCode::add:
        r = addmod_u64(a, b, modulus);
        break;
      case OpCode::sub:
        r = submod_u64(a, b, modulus);
        break;
      case OpCode::mul:
        r = mulmod_u64(a, b, modulus);
        break;
      default:
        throw Error(Errc::internal_error, "unreachable opcode");
    }
    values.push_back(r);
  }
  return values.back();
}

bool value_defined(const Circuit& c) {
  if (!c.has_opcode(OpCode::div)) return true;
  return eval_exact(c).defined();
}

bool value_bound_check(const Circuit& c) {
  EvalOutcome out = eval_exact(c);
  if (!out.defined())
    throw Error(Errc::undefined_value,
                "undefined value (gate " + std::to_string(out.undefined_gate()) + ")");
  BigInt num = out.get().num();
  BigInt den = out.get().den();
  std::size_t bits = std::max(bit_length(num), bit_length(den));
  // max < 2^(2^l)  <=>  bit length <= 2^l
  if (c.size() >= 63) return true;
  return bits <= (1ull << c.size());
}

std::uint64_t value_bits_bound(const Circuit& c) {
  constexpr std::uint64_t kCap = 1ull << 40;
  auto sat_add = [](std::uint64_t a, std::uint64_t b) {
    return std::min(kCap, a + std::min(kCap, b));
  };
  std::vector<std::uint64_t> h;
  h.reserve(c.size() + 1);
  h.push_back(0);  // log2 height of the constant 1
  for (const Gate& g : c.gates()) {
    switch (g.op) {
      case OpCode::add:
      case OpCode::sub:
        h.push_back(sat_add(sat_add(h[g.lhs], h[g.rhs]), 1));
        break;
      case OpCode::mul:
      case OpCode::div:
        h.push_back(sat_add(h[g.lhs], h[g.rhs]));
        break;
      case OpCode::hsq:
        h.push_back(sat_add(sat_add(h[g.lhs], h[g.lhs]), 1));
        break;
    }
  }
  return sat_add(h.back(), 1);
}

std::uint64_t circuit_hash(const Circuit& c) {
  std::string text = serialize_circuit(c, WireFormat::text);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

Circuit repeated_squaring(std::uint32_t l) {
  std::vector<Gate> gates;
  if (l >= 1) gates.push_back({OpCode::add, 0, 0});
  for (std::uint32_t i = 2; i <= l; ++i)
    gates.push_back({OpCode::mul, i - 1, i - 1});
  return Circuit(BasisId::monotone, std::move(gates));
}

}  // namespace acnum
