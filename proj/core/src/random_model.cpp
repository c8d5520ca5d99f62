#include "causal_cgs/random_model.hpp"

#include <algorithm>
#include <numeric>

namespace causal_cgs {

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Expression random_expression(std::mt19937_64& rng, const std::vector<VarId>& pool, int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    VarId v = pool[rng() % pool.size()];
    if (rng() % 4 == 0) return Expression::equals(v, rng() % 2 ? kTrue : kFalse);
    return Expression::var(v);
  }
  // Operands are drawn into locals first: argument evaluation order is
  // unspecified and would make the draw sequence compiler-dependent.
  const auto op = rng() % 4;
  Expression a = random_expression(rng, pool, depth - 1);
  if (op == 0) return Expression::negate(std::move(a));
  Expression b = random_expression(rng, pool, depth - 1);
  if (op == 1) return Expression::conj(std::move(a), std::move(b));
  if (op == 2) return Expression::disj(std::move(a), std::move(b));
  Expression c = random_expression(rng, pool, depth - 1);
  return Expression::ite(std::move(a), std::move(b), std::move(c));
}

}  // namespace

CausalModel random_model(std::mt19937_64& rng, const RandomModelOptions& o) {
  const int n_exo = draw(rng, o.min_exogenous, o.max_exogenous);
  const int n_endo = draw(rng, o.min_endogenous, o.max_endogenous);
  const int n_agents = draw(rng, std::min(o.min_agents, n_endo), std::min(o.max_agents, n_endo));

  std::vector<int> order(n_endo);
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates with our own draws so the sequence does not depend
  // on the standard library's shuffle.
  for (int k = 0; k < n_agents; ++k) std::swap(order[k], order[draw(rng, k, n_endo - 1)]);
  std::vector<bool> is_agent(n_endo, false);
  for (int k = 0; k < n_agents; ++k) is_agent[order[k]] = true;

  ModelBuilder b;
  std::vector<VarId> pool;
  for (int k = 0; k < n_exo; ++k) pool.push_back(b.exogenous("U" + std::to_string(k), {"0", "1"}));
  std::vector<std::string> names;
  for (int k = 0; k < n_endo; ++k) {
    names.push_back((is_agent[k] ? "A" : "X") + std::to_string(k));
    if (is_agent[k])
      b.agent(names.back(), {"0", "1"});
    else
      b.endogenous(names.back(), {"0", "1"});
  }
  for (int k = 0; k < n_endo; ++k) {
    b.equation(names[k], random_expression(rng, pool, o.max_depth));
    pool.push_back(b.id(names[k]));
  }
  return b.build();
}

std::vector<Context> all_contexts(const CausalModel& model) {
  std::vector<Context> out{Context{}};
  for (VarId u : model.exogenous()) {
    std::vector<Context> next;
    for (const auto& c : out)
      for (Symbol s : model.variable(u).domain) {
        Context d = c;
        d[u] = s;
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

namespace {

std::string expression_source(const CausalModel& m, const Expression& e) {
  struct Visitor {
    const CausalModel& m;
    std::string operator()(const expr::Constant& c) const { return m.text(c.value); }
    std::string operator()(const expr::VarRef& r) const { return m.name(r.var); }
    std::string operator()(const expr::Equals& q) const {
      return "(" + m.name(q.var) + " == " + m.text(q.value) + ")";
    }
    std::string operator()(const expr::Not& n) const {
      return "!" + expression_source(m, n.operand);
    }
    std::string operator()(const expr::And& a) const {
      return "(" + expression_source(m, a.lhs) + " & " + expression_source(m, a.rhs) + ")";
    }
    std::string operator()(const expr::Or& a) const {
      return "(" + expression_source(m, a.lhs) + " | " + expression_source(m, a.rhs) + ")";
    }
    std::string operator()(const expr::IfThenElse& i) const {
      return "(if " + expression_source(m, i.cond) + " then " +
             expression_source(m, i.then_branch) + " else " +
             expression_source(m, i.else_branch) + ")";
    }
  };
  return std::visit(Visitor{m}, e.node().v);
}

}  // namespace

std::string to_source(const CausalModel& model, const Context* context) {
  std::string out;
  for (const auto& var : model.variables()) {
    out += var.kind == VarKind::exogenous ? "exogenous " : var.agent ? "agent " : "endogenous ";
    out += var.name + " in {";
    for (std::size_t k = 0; k < var.domain.size(); ++k)
      out += (k ? "," : "") + model.text(var.domain[k]);
    out += "}\n";
  }
  for (VarId v : model.endogenous())
    if (const auto& eq = model.equation(v))
      out += "eq " + model.name(v) + " := " + expression_source(model, *eq) + "\n";
  if (context && !context->empty()) {
    out += "context ";
    bool first = true;
    for (const auto& [u, s] : *context) {
      out += (first ? "" : ", ") + model.name(u) + " = " + model.text(s);
      first = false;
    }
    out += "\n";
  }
  return out;
}

}  // namespace causal_cgs
