#include "lowering.hpp"

#include <algorithm>

namespace acnum {

namespace {

// Rank in the forward reduction chain; plus-hsq is terminal.
int basis_rank(BasisId b) {
  switch (b) {
    case BasisId::arithmetic:
      return 0;
    case BasisId::division_free:
      return 1;
    case BasisId::monotone:
      return 2;
    case BasisId::plus_hsq:
      return 3;
  }
  return -1;
}

void require_defined(const Circuit& c, const char* what) {
  if (!value_defined(c))
    throw Error(Errc::undefined_value, std::string(what) + ": input value is undefined");
}

Circuit zero_circuit_df() { return Circuit(BasisId::division_free, {{OpCode::sub, 0, 0}}); }

struct GateBuilder {
  std::vector<Gate> gates;

  std::uint32_t emit(OpCode op, std::uint32_t lhs, std::uint32_t rhs = 0) {
    gates.push_back({op, lhs, rhs});
    return static_cast<std::uint32_t>(gates.size());
  }
};

}  // namespace

LoweringReport make_report(std::string pass, std::size_t in, std::size_t out) {
  return {std::move(pass), in, out,
          Rat(BigInt(static_cast<unsigned long>(out)),
              BigInt(static_cast<unsigned long>(std::max<std::size_t>(in, 1))))};
}

Circuit merge_to_sign(const Circuit& s1, const Circuit& s2) {
  if (s1.basis() == BasisId::plus_hsq || s2.basis() == BasisId::plus_hsq)
    throw Error(Errc::unsupported, "merge_to_sign: basis lacks subtraction");
  BasisId basis = (s1.basis() == BasisId::arithmetic || s2.basis() == BasisId::arithmetic)
                      ? BasisId::arithmetic
                      : BasisId::division_free;
  std::vector<Gate> gates(s1.gates().begin(), s1.gates().end());
  std::uint32_t shift = static_cast<std::uint32_t>(s1.size());
  auto remap = [shift](std::uint32_t node) { return node == 0 ? 0 : node + shift; };
  for (const Gate& g : s2.gates())
    gates.push_back({g.op, remap(g.lhs), opcode_is_unary(g.op) ? 0u : remap(g.rhs)});
  std::uint32_t out1 = static_cast<std::uint32_t>(s1.size());
  std::uint32_t out2 = static_cast<std::uint32_t>(s1.size() + s2.size());
  gates.push_back({OpCode::sub, out1, out2});
  return Circuit(basis, std::move(gates));
}

Circuit drop_division(const Circuit& s, LoweringReport* report) {
  require_defined(s, "drop_division");
  if (!s.has_opcode(OpCode::div)) {
    // pass-through, denominator track constant 1
    Circuit out(BasisId::division_free, {s.gates().begin(), s.gates().end()});
    if (report) *report = make_report("drop-division", s.size(), out.size());
    return out;
  }
  GateBuilder b;
  std::size_t n = s.size();
  std::vector<std::uint32_t> num(n + 1), den(n + 1);
  num[0] = 0;
  den[0] = 0;
  std::uint32_t node = 1;
  for (const Gate& g : s.gates()) {
    switch (g.op) {
      case OpCode::add:
      case OpCode::sub: {
        std::uint32_t a1 = b.emit(OpCode::mul, num[g.lhs], den[g.rhs]);
        std::uint32_t a2 = b.emit(OpCode::mul, den[g.lhs], num[g.rhs]);
        den[node] = b.emit(OpCode::mul, den[g.lhs], den[g.rhs]);
        num[node] = b.emit(g.op, a1, a2);
        break;
      }
      case OpCode::mul:
        den[node] = b.emit(OpCode::mul, den[g.lhs], den[g.rhs]);
        num[node] = b.emit(OpCode::mul, num[g.lhs], num[g.rhs]);
        break;
      case OpCode::div:
        den[node] = b.emit(OpCode::mul, den[g.lhs], num[g.rhs]);
        num[node] = b.emit(OpCode::mul, num[g.lhs], den[g.rhs]);
        break;
      case OpCode::hsq:
        throw Error(Errc::unsupported, "drop_division: hsq input");
    }
    ++node;
  }
  b.emit(OpCode::mul, num[n], den[n]);
  Circuit out(BasisId::division_free, std::move(b.gates));
  if (report) *report = make_report("drop-division", s.size(), out.size());
  return out;
}

namespace detail {

PairTracks drop_subtraction_tracks(const Circuit& s) {
  if (s.has_opcode(OpCode::div) || s.has_opcode(OpCode::hsq))
    throw Error(Errc::invalid_argument, "drop_subtraction: input must be division-free");
  GateBuilder b;
  std::size_t n = s.size();
  std::vector<std::uint32_t> pos(n + 1), neg(n + 1);
  pos[0] = b.emit(OpCode::add, 0, 0);  // track start (2, 1)
  neg[0] = 0;
  std::uint32_t node = 1;
  for (const Gate& g : s.gates()) {
    switch (g.op) {
      case OpCode::add:
        pos[node] = b.emit(OpCode::add, pos[g.lhs], pos[g.rhs]);
        neg[node] = b.emit(OpCode::add, neg[g.lhs], neg[g.rhs]);
        break;
      case OpCode::sub:
        pos[node] = b.emit(OpCode::add, pos[g.lhs], neg[g.rhs]);
        neg[node] = b.emit(OpCode::add, neg[g.lhs], pos[g.rhs]);
        break;
      case OpCode::mul: {
        // (A-B)(C-D) = (AC + BD) - (BC + AD)
        std::uint32_t pp = b.emit(OpCode::mul, pos[g.lhs], pos[g.rhs]);
        std::uint32_t nn = b.emit(OpCode::mul, neg[g.lhs], neg[g.rhs]);
        std::uint32_t np = b.emit(OpCode::mul, neg[g.lhs], pos[g.rhs]);
        std::uint32_t pn = b.emit(OpCode::mul, pos[g.lhs], neg[g.rhs]);
        pos[node] = b.emit(OpCode::add, pp, nn);
        neg[node] = b.emit(OpCode::add, np, pn);
        break;
      }
      default:
        throw Error(Errc::internal_error, "unreachable opcode");
    }
    ++node;
  }
  return {Circuit(BasisId::monotone, std::move(b.gates)), std::move(pos), std::move(neg)};
}

PairTracks to_plus_hsq_tracks(const Circuit& s) {
  if (s.has_opcode(OpCode::div) || s.has_opcode(OpCode::sub) || s.has_opcode(OpCode::hsq))
    throw Error(Errc::invalid_argument, "to_plus_hsq: input must be monotone");
  GateBuilder b;
  std::size_t n = s.size();
  std::vector<std::uint32_t> pos(n + 1), neg(n + 1);
  pos[0] = b.emit(OpCode::add, 0, 0);
  neg[0] = 0;
  std::uint32_t node = 1;
  for (const Gate& g : s.gates()) {
    switch (g.op) {
      case OpCode::add:
        pos[node] = b.emit(OpCode::add, pos[g.lhs], pos[g.rhs]);
        neg[node] = b.emit(OpCode::add, neg[g.lhs], neg[g.rhs]);
        break;
      case OpCode::mul: {
        // products via half-squares of the four track sums
        std::uint32_t s_pp = b.emit(OpCode::add, pos[g.lhs], pos[g.rhs]);
        std::uint32_t s_nn = b.emit(OpCode::add, neg[g.lhs], neg[g.rhs]);
        std::uint32_t s_pn = b.emit(OpCode::add, pos[g.lhs], neg[g.rhs]);
        std::uint32_t s_np = b.emit(OpCode::add, neg[g.lhs], pos[g.rhs]);
        std::uint32_t h_pp = b.emit(OpCode::hsq, s_pp);
        std::uint32_t h_nn = b.emit(OpCode::hsq, s_nn);
        std::uint32_t h_pn = b.emit(OpCode::hsq, s_pn);
        std::uint32_t h_np = b.emit(OpCode::hsq, s_np);
        pos[node] = b.emit(OpCode::add, h_pp, h_nn);
        neg[node] = b.emit(OpCode::add, h_pn, h_np);
        break;
      }
      default:
        throw Error(Errc::internal_error, "unreachable opcode");
    }
    ++node;
  }
  return {Circuit(BasisId::plus_hsq, std::move(b.gates)), std::move(pos), std::move(neg)};
}

}  // namespace detail

PairCircuit drop_subtraction(const Circuit& s, LoweringReport* report) {
  auto t = detail::drop_subtraction_tracks(s);
  if (report) *report = make_report("drop-subtraction", s.size(), t.program.size());
  return {std::move(t.program), t.pos[s.size()], t.neg[s.size()]};
}

PairCircuit to_plus_hsq(const Circuit& s, LoweringReport* report) {
  auto t = detail::to_plus_hsq_tracks(s);
  if (report) *report = make_report("to-plus-hsq", s.size(), t.program.size());
  return {std::move(t.program), t.pos[s.size()], t.neg[s.size()]};
}

namespace {

// Both track outputs are emitted as the final two, mutually independent
// gates; swapping them puts either one last.
Circuit reorder_output_last(const Circuit& program, std::uint32_t out) {
  if (out == 0) return Circuit(program.basis(), {});  // node 0 is the empty circuit's value
  std::uint32_t last = static_cast<std::uint32_t>(program.size());
  if (out == last) return program;
  if (out + 1 != last)
    throw Error(Errc::internal_error, "pair output is not one of the final two gates");
  const Gate& final_gate = program.gate(last);
  if (final_gate.lhs == out || (!opcode_is_unary(final_gate.op) && final_gate.rhs == out))
    throw Error(Errc::internal_error, "pair outputs are not independent");
  std::vector<Gate> gates(program.gates().begin(), program.gates().end());
  std::swap(gates[last - 1], gates[last - 2]);
  return Circuit(program.basis(), std::move(gates));
}

}  // namespace

Circuit extract_pos(const PairCircuit& p) { return reorder_output_last(p.program, p.pos_out); }
Circuit extract_neg(const PairCircuit& p) { return reorder_output_last(p.program, p.neg_out); }

namespace {

// Joins b's gates after a's, sharing node 0; returns the node remap offset.
std::uint32_t append_shifted(std::vector<Gate>& gates, const Circuit& extra) {
  std::uint32_t shift = static_cast<std::uint32_t>(gates.size());
  auto remap = [shift](std::uint32_t node) { return node == 0 ? 0 : node + shift; };
  for (const Gate& g : extra.gates())
    gates.push_back({g.op, remap(g.lhs), opcode_is_unary(g.op) ? 0u : remap(g.rhs)});
  return shift;
}

// Comparison pair over plus-hsq from two monotone circuits: join the pair
// lowerings and cross-combine the tracks with one add each.
std::pair<Circuit, Circuit> plus_hsq_instance_from_monotone(const Circuit& m1, const Circuit& m2,
                                                            std::vector<LoweringReport>* reports) {
  LoweringReport r1, r2;
  auto t1 = detail::to_plus_hsq_tracks(m1);
  auto t2 = detail::to_plus_hsq_tracks(m2);
  r1 = make_report("to-plus-hsq", m1.size(), t1.program.size());
  r2 = make_report("to-plus-hsq", m2.size(), t2.program.size());
  if (reports) {
    reports->push_back(r1);
    reports->push_back(r2);
  }
  std::vector<Gate> body(t1.program.gates().begin(), t1.program.gates().end());
  std::uint32_t shift = append_shifted(body, t2.program);
  std::uint32_t p1 = t1.pos[m1.size()], n1 = t1.neg[m1.size()];
  std::uint32_t p2 = t2.pos[m2.size()] + shift, n2 = t2.neg[m2.size()] + shift;
  std::vector<Gate> g1 = body, g2 = body;
  g1.push_back({OpCode::add, p1, n2});
  g2.push_back({OpCode::add, p2, n1});
  return {Circuit(BasisId::plus_hsq, std::move(g1)), Circuit(BasisId::plus_hsq, std::move(g2))};
}

// Same construction applied to one monotone pair (value v = pos - neg):
// S' computes P(pos)+N(neg), S'' computes N(pos)+P(neg), so
// v(S') - v(S'') = v.
std::pair<Circuit, Circuit> plus_hsq_instance_from_pair(const PairCircuit& pr,
                                                        std::vector<LoweringReport>* reports) {
  auto t = detail::to_plus_hsq_tracks(pr.program);
  if (reports)
    reports->push_back(make_report("to-plus-hsq", pr.program.size(), t.program.size()));
  std::vector<Gate> g1(t.program.gates().begin(), t.program.gates().end());
  std::vector<Gate> g2 = g1;
  g1.push_back({OpCode::add, t.pos[pr.pos_out], t.neg[pr.neg_out]});
  g2.push_back({OpCode::add, t.neg[pr.pos_out], t.pos[pr.neg_out]});
  return {Circuit(BasisId::plus_hsq, std::move(g1)), Circuit(BasisId::plus_hsq, std::move(g2))};
}

// Single division-free circuit with the sign and zero-set of v(s1) - v(s2).
Circuit difference_division_free(const Circuit& s1, const Circuit& s2,
                                 std::vector<LoweringReport>* reports) {
  Circuit merged = merge_to_sign(s1, s2);
  if (reports)
    reports->push_back(make_report("merge-to-sign", s1.size() + s2.size(), merged.size()));
  if (!merged.has_opcode(OpCode::div))
    return Circuit(BasisId::division_free, {merged.gates().begin(), merged.gates().end()});
  LoweringReport r;
  Circuit out = drop_division(merged, &r);
  if (reports) reports->push_back(r);
  return out;
}

}  // namespace

std::pair<Circuit, Circuit> comparison_instance(const Circuit& s1, const Circuit& s2,
                                                BasisId target,
                                                std::vector<LoweringReport>* reports) {
  BasisId b1 = minimal_basis(s1.gates());
  BasisId b2 = minimal_basis(s2.gates());
  bool hsq1 = b1 == BasisId::plus_hsq && !s1.empty();
  bool hsq2 = b2 == BasisId::plus_hsq && !s2.empty();
  // empty circuits embed anywhere
  if (s1.empty()) b1 = target == BasisId::plus_hsq ? BasisId::plus_hsq : BasisId::monotone;
  if (s2.empty()) b2 = target == BasisId::plus_hsq ? BasisId::plus_hsq : BasisId::monotone;

  if (hsq1 || hsq2) {
    if (target == BasisId::plus_hsq && (hsq1 || s1.empty()) && (hsq2 || s2.empty()))
      return {Circuit(BasisId::plus_hsq, {s1.gates().begin(), s1.gates().end()}),
              Circuit(BasisId::plus_hsq, {s2.gates().begin(), s2.gates().end()})};
    throw Error(Errc::unsupported,
                "comparison_instance: no reduction leaves the plus-hsq basis");
  }

  if (value_defined(s1) == false || value_defined(s2) == false)
    throw Error(Errc::undefined_value, "comparison_instance: undefined input value");

  bool needs_merge = basis_rank(b1) < basis_rank(BasisId::monotone) ||
                     basis_rank(b2) < basis_rank(BasisId::monotone);

  switch (target) {
    case BasisId::arithmetic:
      return {Circuit(BasisId::arithmetic, {s1.gates().begin(), s1.gates().end()}),
              Circuit(BasisId::arithmetic, {s2.gates().begin(), s2.gates().end()})};
    case BasisId::division_free: {
      if (!s1.has_opcode(OpCode::div) && !s2.has_opcode(OpCode::div))
        return {Circuit(BasisId::division_free, {s1.gates().begin(), s1.gates().end()}),
                Circuit(BasisId::division_free, {s2.gates().begin(), s2.gates().end()})};
      return {difference_division_free(s1, s2, reports), zero_circuit_df()};
    }
    case BasisId::monotone: {
      if (!needs_merge)
        return {Circuit(BasisId::monotone, {s1.gates().begin(), s1.gates().end()}),
                Circuit(BasisId::monotone, {s2.gates().begin(), s2.gates().end()})};
      Circuit d = difference_division_free(s1, s2, reports);
      LoweringReport r;
      PairCircuit pr = drop_subtraction(d, &r);
      if (reports) reports->push_back(r);
      return {extract_pos(pr), extract_neg(pr)};
    }
    case BasisId::plus_hsq: {
      if (!needs_merge) return plus_hsq_instance_from_monotone(s1, s2, reports);
      Circuit d = difference_division_free(s1, s2, reports);
      LoweringReport r;
      PairCircuit pr = drop_subtraction(d, &r);
      if (reports) reports->push_back(r);
      return plus_hsq_instance_from_pair(pr, reports);
    }
  }
  throw Error(Errc::internal_error, "unreachable target basis");
}

namespace {

std::vector<bool> reachable_set(const Circuit& c, std::vector<std::uint32_t> roots) {
  std::vector<bool> live(c.size() + 1, false);
  live[0] = true;
  while (!roots.empty()) {
    std::uint32_t node = roots.back();
    roots.pop_back();
    if (live[node]) continue;
    live[node] = true;
    const Gate& g = c.gate(node);
    if (g.lhs != 0 && !live[g.lhs]) roots.push_back(g.lhs);
    if (!opcode_is_unary(g.op) && g.rhs != 0 && !live[g.rhs]) roots.push_back(g.rhs);
  }
  return live;
}

Circuit rebuild_live(const Circuit& c, const std::vector<bool>& live,
                     std::vector<std::uint32_t>& remap) {
  remap.assign(c.size() + 1, 0);
  std::vector<Gate> gates;
  std::uint32_t next = 1;
  for (std::uint32_t node = 1; node <= c.size(); ++node) {
    if (!live[node]) continue;
    Gate g = c.gate(node);
    g.lhs = remap[g.lhs];
    if (!opcode_is_unary(g.op)) g.rhs = remap[g.rhs];
    gates.push_back(g);
    remap[node] = next++;
  }
  return Circuit(c.basis(), std::move(gates));
}

}  // namespace

Circuit remove_dead_gates(const Circuit& c) {
  if (c.empty()) return c;
  auto live = reachable_set(c, {static_cast<std::uint32_t>(c.size())});
  std::vector<std::uint32_t> remap;
  return rebuild_live(c, live, remap);
}

PairCircuit remove_dead_gates(const PairCircuit& p) {
  auto live = reachable_set(p.program, {p.pos_out, p.neg_out});
  std::vector<std::uint32_t> remap;
  Circuit program = rebuild_live(p.program, live, remap);
  return {std::move(program), remap[p.pos_out], remap[p.neg_out]};
}

LowerResult lower_to(const Circuit& s, BasisId target, bool cleanup) {
  LowerResult result;
  BasisId b = minimal_basis(s.gates());
  if (b == BasisId::plus_hsq && !s.empty() && target != BasisId::plus_hsq)
    throw Error(Errc::unsupported, "lower: no reduction leaves the plus-hsq basis");

  auto embed = [&](BasisId as) {
    result.circuit = Circuit(as, {s.gates().begin(), s.gates().end()});
    result.reports.push_back(make_report("embed", s.size(), s.size()));
  };

  switch (target) {
    case BasisId::arithmetic:
      embed(BasisId::arithmetic);
      break;
    case BasisId::division_free: {
      if (!s.has_opcode(OpCode::div)) {
        embed(BasisId::division_free);
      } else {
        LoweringReport r;
        result.circuit = drop_division(s, &r);
        result.reports.push_back(r);
      }
      break;
    }
    case BasisId::monotone: {
      if (b == BasisId::monotone) {
        embed(BasisId::monotone);
        break;
      }
      Circuit d = s.has_opcode(OpCode::div) ? [&] {
        LoweringReport r;
        Circuit out = drop_division(s, &r);
        result.reports.push_back(r);
        return out;
      }()
                                            : Circuit(BasisId::division_free,
                                                      {s.gates().begin(), s.gates().end()});
      LoweringReport r;
      result.pair = drop_subtraction(d, &r);
      result.reports.push_back(r);
      break;
    }
    case BasisId::plus_hsq: {
      if (b == BasisId::plus_hsq) {
        embed(BasisId::plus_hsq);
        break;
      }
      if (b == BasisId::monotone) {
        LoweringReport r;
        result.pair = to_plus_hsq(s, &r);
        result.reports.push_back(r);
        break;
      }
      Circuit d = s.has_opcode(OpCode::div) ? [&] {
        LoweringReport r;
        Circuit out = drop_division(s, &r);
        result.reports.push_back(r);
        return out;
      }()
                                            : Circuit(BasisId::division_free,
                                                      {s.gates().begin(), s.gates().end()});
      LoweringReport r;
      PairCircuit pr = drop_subtraction(d, &r);
      result.reports.push_back(r);
      auto t = detail::to_plus_hsq_tracks(pr.program);
      result.reports.push_back(make_report("to-plus-hsq", pr.program.size(), t.program.size()));
      std::vector<Gate> g1(t.program.gates().begin(), t.program.gates().end());
      std::uint32_t pos = t.pos[pr.pos_out], negp = t.neg[pr.pos_out];
      std::uint32_t posn = t.pos[pr.neg_out], negn = t.neg[pr.neg_out];
      GateBuilder b2;
      b2.gates = std::move(g1);
      std::uint32_t p = b2.emit(OpCode::add, pos, negn);
      std::uint32_t q = b2.emit(OpCode::add, negp, posn);
      result.pair = PairCircuit{Circuit(BasisId::plus_hsq, std::move(b2.gates)), p, q};
      break;
    }
  }
  if (cleanup) {
    if (result.circuit) {
      std::size_t before = result.circuit->size();
      result.circuit = remove_dead_gates(*result.circuit);
      result.reports.push_back(make_report("cleanup", before, result.circuit->size()));
    } else if (result.pair) {
      std::size_t before = result.pair->program.size();
      result.pair = remove_dead_gates(*result.pair);
      result.reports.push_back(make_report("cleanup", before, result.pair->program.size()));
    }
  }
  return result;
}

}  // namespace acnum
