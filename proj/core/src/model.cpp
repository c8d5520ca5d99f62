#include "causal_cgs/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace causal_cgs {

SymbolTable::SymbolTable() {
  intern("0");
  intern("1");
}

Symbol SymbolTable::intern(std::string_view text) {
  std::string key(text);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  auto id = static_cast<Symbol>(texts_.size());
  texts_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<Symbol> SymbolTable::find(std::string_view text) const {
  if (auto it = ids_.find(std::string(text)); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& SymbolTable::text(Symbol s) const { return texts_.at(s); }

// ---------------------------------------------------------------------------

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool truthy(Symbol s) { return s == kTrue; }
Symbol boolean(bool b) { return b ? kTrue : kFalse; }
}  // namespace

Expression Expression::constant(Symbol value) {
  return Expression(std::make_shared<const ExprNode>(ExprNode{expr::Constant{value}}));
}
Expression Expression::var(VarId v) {
  return Expression(std::make_shared<const ExprNode>(ExprNode{expr::VarRef{v}}));
}
Expression Expression::equals(VarId v, Symbol value) {
  return Expression(std::make_shared<const ExprNode>(ExprNode{expr::Equals{v, value}}));
}
Expression Expression::negate(Expression e) {
  return Expression(std::make_shared<const ExprNode>(ExprNode{expr::Not{std::move(e)}}));
}
Expression Expression::conj(Expression lhs, Expression rhs) {
  return Expression(std::make_shared<const ExprNode>(
      ExprNode{expr::And{std::move(lhs), std::move(rhs)}}));
}
Expression Expression::disj(Expression lhs, Expression rhs) {
  return Expression(std::make_shared<const ExprNode>(
      ExprNode{expr::Or{std::move(lhs), std::move(rhs)}}));
}
Expression Expression::ite(Expression cond, Expression then_branch,
                           Expression else_branch) {
  return Expression(std::make_shared<const ExprNode>(ExprNode{expr::IfThenElse{
      std::move(cond), std::move(then_branch), std::move(else_branch)}}));
}

Symbol eval_expression(const Expression& e, std::span<const Symbol> values) {
  return std::visit(
      overloaded{
          [](const expr::Constant& c) { return c.value; },
          [&](const expr::VarRef& r) { return values[r.var]; },
          [&](const expr::Equals& q) { return boolean(values[q.var] == q.value); },
          [&](const expr::Not& n) {
            return boolean(!truthy(eval_expression(n.operand, values)));
          },
          [&](const expr::And& a) {
            return boolean(truthy(eval_expression(a.lhs, values)) &&
                           truthy(eval_expression(a.rhs, values)));
          },
          [&](const expr::Or& o) {
            return boolean(truthy(eval_expression(o.lhs, values)) ||
                           truthy(eval_expression(o.rhs, values)));
          },
          [&](const expr::IfThenElse& i) {
            return truthy(eval_expression(i.cond, values))
                       ? eval_expression(i.then_branch, values)
                       : eval_expression(i.else_branch, values);
          },
      },
      e.node().v);
}

void collect_variables(const Expression& e, std::set<VarId>& out) {
  std::visit(overloaded{
                 [](const expr::Constant&) {},
                 [&](const expr::VarRef& r) { out.insert(r.var); },
                 [&](const expr::Equals& q) { out.insert(q.var); },
                 [&](const expr::Not& n) { collect_variables(n.operand, out); },
                 [&](const expr::And& a) {
                   collect_variables(a.lhs, out);
                   collect_variables(a.rhs, out);
                 },
                 [&](const expr::Or& o) {
                   collect_variables(o.lhs, out);
                   collect_variables(o.rhs, out);
                 },
                 [&](const expr::IfThenElse& i) {
                   collect_variables(i.cond, out);
                   collect_variables(i.then_branch, out);
                   collect_variables(i.else_branch, out);
                 },
             },
             e.node().v);
}

EventFormula EventFormula::event(VarId v, Symbol value) {
  return EventFormula(
      std::make_shared<const FormulaNode>(FormulaNode{formula::Event{v, value}}));
}
EventFormula EventFormula::negate(EventFormula f) {
  return EventFormula(
      std::make_shared<const FormulaNode>(FormulaNode{formula::Not{std::move(f)}}));
}
EventFormula EventFormula::conj(EventFormula lhs, EventFormula rhs) {
  return EventFormula(std::make_shared<const FormulaNode>(
      FormulaNode{formula::And{std::move(lhs), std::move(rhs)}}));
}
EventFormula EventFormula::disj(EventFormula lhs, EventFormula rhs) {
  return EventFormula(std::make_shared<const FormulaNode>(
      FormulaNode{formula::Or{std::move(lhs), std::move(rhs)}}));
}

void collect_variables(const EventFormula& f, std::set<VarId>& out) {
  std::visit(overloaded{
                 [&](const formula::Event& e) { out.insert(e.var); },
                 [&](const formula::Not& n) { collect_variables(n.operand, out); },
                 [&](const formula::And& a) {
                   collect_variables(a.lhs, out);
                   collect_variables(a.rhs, out);
                 },
                 [&](const formula::Or& o) {
                   collect_variables(o.lhs, out);
                   collect_variables(o.rhs, out);
                 },
             },
             f.node().v);
}

// ---------------------------------------------------------------------------

bool Variable::in_domain(Symbol s) const {
  return std::find(domain.begin(), domain.end(), s) != domain.end();
}

bool Variable::is_boolean() const {
  return domain.size() == 2 && in_domain(kFalse) && in_domain(kTrue);
}

namespace {

// Kahn's algorithm over endogenous variables, ties broken by declaration
// order so the result is reproducible.
std::optional<std::vector<VarId>> topological_sort(
    const std::vector<Variable>& vars,
    const std::vector<std::optional<Expression>>& equations) {
  const std::size_t n = vars.size();
  std::vector<std::set<VarId>> parents(n);
  std::vector<std::vector<VarId>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (VarId v = 0; v < n; ++v) {
    if (vars[v].kind != VarKind::endogenous || !equations[v]) continue;
    collect_variables(*equations[v], parents[v]);
    for (VarId p : parents[v]) {
      if (p >= n) return std::nullopt;
      if (vars[p].kind != VarKind::endogenous) continue;
      children[p].push_back(v);
      ++indegree[v];
    }
  }
  std::vector<VarId> order;
  std::set<VarId> ready;
  std::size_t total = 0;
  for (VarId v = 0; v < n; ++v) {
    if (vars[v].kind != VarKind::endogenous) continue;
    ++total;
    if (indegree[v] == 0) ready.insert(v);
  }
  while (!ready.empty()) {
    VarId v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (VarId c : children[v])
      if (--indegree[c] == 0) ready.insert(c);
  }
  if (order.size() != total) return std::nullopt;
  return order;
}

}  // namespace

CausalModel::CausalModel(std::shared_ptr<const SymbolTable> symbols,
                         std::vector<Variable> variables,
                         std::vector<std::optional<Expression>> equations)
    : symbols_(std::move(symbols)),
      variables_(std::move(variables)),
      equations_(std::move(equations)) {
  equations_.resize(variables_.size());
  for (VarId v = 0; v < variables_.size(); ++v) {
    const auto& var = variables_[v];
    by_name_.emplace(var.name, v);  // first declaration wins
    if (var.kind == VarKind::exogenous)
      exogenous_.push_back(v);
    else
      endogenous_.push_back(v);
    if (var.agent) agents_.push_back(v);
  }
  order_ = topological_sort(variables_, equations_);
}

std::optional<VarId> CausalModel::find(std::string_view name) const {
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end())
    return it->second;
  return std::nullopt;
}

VarId CausalModel::id(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw ModelError("unknown variable '" + std::string(name) + "'");
}

const std::vector<VarId>& CausalModel::topological_order() const {
  if (!order_) throw ModelError("causal network is cyclic");
  return *order_;
}

// ---------------------------------------------------------------------------

ModelBuilder::ModelBuilder() : symbols_(std::make_shared<SymbolTable>()) {}

VarId ModelBuilder::add(std::string name, VarKind kind,
                        std::vector<std::string> domain, bool agent) {
  Variable var;
  var.name = std::move(name);
  var.kind = kind;
  var.agent = agent;
  for (auto& d : domain) var.domain.push_back(symbols_->intern(d));
  variables_.push_back(std::move(var));
  equations_.emplace_back();
  return static_cast<VarId>(variables_.size() - 1);
}

VarId ModelBuilder::exogenous(std::string name, std::vector<std::string> domain) {
  return add(std::move(name), VarKind::exogenous, std::move(domain), false);
}
VarId ModelBuilder::endogenous(std::string name, std::vector<std::string> domain) {
  return add(std::move(name), VarKind::endogenous, std::move(domain), false);
}
VarId ModelBuilder::agent(std::string name, std::vector<std::string> domain) {
  return add(std::move(name), VarKind::endogenous, std::move(domain), true);
}

void ModelBuilder::mark_agent(std::string_view name) {
  variables_.at(id(name)).agent = true;
}

VarId ModelBuilder::id(std::string_view name) const {
  for (VarId v = 0; v < variables_.size(); ++v)
    if (variables_[v].name == name) return v;
  throw ModelError("unknown variable '" + std::string(name) + "'");
}

ModelBuilder& ModelBuilder::equation(std::string_view name, Expression rhs) {
  equations_.at(id(name)) = std::move(rhs);
  return *this;
}

CausalModel ModelBuilder::build() const {
  return CausalModel(std::make_shared<const SymbolTable>(*symbols_), variables_,
                     equations_);
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(Diagnostic::Kind k) {
  using K = Diagnostic::Kind;
  switch (k) {
    case K::invalid_name: return "invalid-name";
    case K::duplicate_variable: return "duplicate-variable";
    case K::empty_domain: return "empty-domain";
    case K::duplicate_value: return "duplicate-value";
    case K::missing_equation: return "missing-equation";
    case K::unexpected_equation: return "unexpected-equation";
    case K::agent_not_endogenous: return "agent-not-endogenous";
    case K::unknown_variable: return "unknown-variable";
    case K::value_out_of_domain: return "value-out-of-domain";
    case K::non_boolean_operand: return "non-boolean-operand";
    case K::equation_range: return "equation-range";
    case K::cycle: return "cycle";
  }
  return "unknown";
}

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

class ExpressionChecker {
 public:
  ExpressionChecker(const CausalModel& m, std::string owner,
                    std::vector<Diagnostic>& out)
      : model_(m), owner_(std::move(owner)), out_(out) {}

  // Returns the set of values the expression can produce, or nullopt after a
  // reference error made the range meaningless.
  std::optional<std::set<Symbol>> range(const Expression& e) {
    return std::visit(
        overloaded{
            [&](const expr::Constant& c) -> std::optional<std::set<Symbol>> {
              return std::set<Symbol>{c.value};
            },
            [&](const expr::VarRef& r) -> std::optional<std::set<Symbol>> {
              if (!known(r.var)) return std::nullopt;
              const auto& d = model_.variable(r.var).domain;
              return std::set<Symbol>(d.begin(), d.end());
            },
            [&](const expr::Equals& q) -> std::optional<std::set<Symbol>> {
              if (known(q.var) && !model_.variable(q.var).in_domain(q.value))
                report(Diagnostic::Kind::value_out_of_domain,
                       "value '" + model_.text(q.value) +
                           "' is not in the domain of " + model_.name(q.var));
              return std::set<Symbol>{kFalse, kTrue};
            },
            [&](const expr::Not& n) -> std::optional<std::set<Symbol>> {
              boolean_operand(n.operand);
              return std::set<Symbol>{kFalse, kTrue};
            },
            [&](const expr::And& a) -> std::optional<std::set<Symbol>> {
              boolean_operand(a.lhs);
              boolean_operand(a.rhs);
              return std::set<Symbol>{kFalse, kTrue};
            },
            [&](const expr::Or& o) -> std::optional<std::set<Symbol>> {
              boolean_operand(o.lhs);
              boolean_operand(o.rhs);
              return std::set<Symbol>{kFalse, kTrue};
            },
            [&](const expr::IfThenElse& i) -> std::optional<std::set<Symbol>> {
              boolean_operand(i.cond);
              auto t = range(i.then_branch);
              auto f = range(i.else_branch);
              if (!t || !f) return std::nullopt;
              t->insert(f->begin(), f->end());
              return t;
            },
        },
        e.node().v);
  }

 private:
  bool known(VarId v) {
    if (v < model_.num_variables()) return true;
    report(Diagnostic::Kind::unknown_variable,
           "reference to undefined variable #" + std::to_string(v));
    return false;
  }

  void boolean_operand(const Expression& e) {
    auto r = range(e);
    if (!r) return;
    for (Symbol s : *r) {
      if (s != kFalse && s != kTrue) {
        report(Diagnostic::Kind::non_boolean_operand,
               "operand can take non-Boolean value '" + model_.text(s) + "'");
        return;
      }
    }
  }

  void report(Diagnostic::Kind k, std::string msg) {
    out_.push_back({k, owner_, "equation for " + owner_ + ": " + msg});
  }

  const CausalModel& model_;
  std::string owner_;
  std::vector<Diagnostic>& out_;
};

// Finds one cycle among endogenous variables by DFS; the returned list starts
// and ends with the same variable.
std::vector<VarId> find_cycle(const CausalModel& m) {
  const std::size_t n = m.num_variables();
  std::vector<std::vector<VarId>> parents(n);
  for (VarId v : m.endogenous()) {
    if (!m.equation(v)) continue;
    std::set<VarId> ps;
    collect_variables(*m.equation(v), ps);
    for (VarId p : ps)
      if (p < n && m.is_endogenous(p)) parents[v].push_back(p);
  }
  enum class Mark { white, grey, black };
  std::vector<Mark> mark(n, Mark::white);
  std::vector<VarId> stack;
  std::vector<VarId> cycle;
  auto dfs = [&](auto&& self, VarId v) -> bool {
    mark[v] = Mark::grey;
    stack.push_back(v);
    for (VarId p : parents[v]) {
      if (mark[p] == Mark::grey) {
        auto it = std::find(stack.begin(), stack.end(), p);
        cycle.assign(it, stack.end());
        cycle.push_back(p);
        std::reverse(cycle.begin(), cycle.end());
        return true;
      }
      if (mark[p] == Mark::white && self(self, p)) return true;
    }
    stack.pop_back();
    mark[v] = Mark::black;
    return false;
  };
  for (VarId v : m.endogenous())
    if (mark[v] == Mark::white && dfs(dfs, v)) return cycle;
  return {};
}

}  // namespace

std::vector<Diagnostic> validate_model(const CausalModel& model) {
  using K = Diagnostic::Kind;
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (VarId v = 0; v < model.num_variables(); ++v) {
    const auto& var = model.variable(v);
    if (!valid_identifier(var.name))
      out.push_back({K::invalid_name, var.name,
                     "variable name '" + var.name + "' is not an identifier"});
    if (!seen.insert(var.name).second)
      out.push_back({K::duplicate_variable, var.name,
                     "variable " + var.name + " is declared twice"});
    if (var.domain.empty())
      out.push_back({K::empty_domain, var.name,
                     "variable " + var.name + " has an empty domain"});
    std::set<Symbol> values(var.domain.begin(), var.domain.end());
    if (values.size() != var.domain.size())
      out.push_back({K::duplicate_value, var.name,
                     "domain of " + var.name + " repeats a value"});
    if (var.agent && var.kind != VarKind::endogenous)
      out.push_back({K::agent_not_endogenous, var.name,
                     "agent variable " + var.name + " is not endogenous"});
    const auto& eq = model.equation(v);
    if (var.kind == VarKind::endogenous && !eq)
      out.push_back({K::missing_equation, var.name,
                     "endogenous variable " + var.name + " has no equation"});
    if (var.kind == VarKind::exogenous && eq)
      out.push_back({K::unexpected_equation, var.name,
                     "exogenous variable " + var.name + " has an equation"});
    if (eq) {
      ExpressionChecker checker(model, var.name, out);
      if (auto r = checker.range(*eq)) {
        for (Symbol s : *r) {
          if (!var.in_domain(s)) {
            out.push_back({K::equation_range, var.name,
                           "equation for " + var.name + " can produce '" +
                               model.text(s) + "', which is not in its domain"});
            break;
          }
        }
      }
    }
  }
  if (!model.acyclic()) {
    auto cycle = find_cycle(model);
    std::string path;
    for (std::size_t i = 0; i < cycle.size(); ++i)
      path += (i ? " -> " : "") + model.name(cycle[i]);
    out.push_back({K::cycle, cycle.empty() ? std::string{} : model.name(cycle.front()),
                   "causal network has a cycle: " + path});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {
// Error messages may name symbols that were never interned.
std::string value_text(const CausalModel& model, Symbol s) {
  return s < model.symbols().size() ? model.text(s) : "#" + std::to_string(s);
}
}  // namespace

void check_context(const CausalModel& model, const Context& context) {
  for (const auto& [v, s] : context) {
    if (v >= model.num_variables() || model.is_endogenous(v))
      throw ModelError("context sets a non-exogenous variable");
    if (!model.variable(v).in_domain(s))
      throw ModelError("context value '" + value_text(model, s) +
                       "' is not in the domain of " + model.name(v));
  }
  for (VarId u : model.exogenous())
    if (!context.contains(u))
      throw ModelError("context does not set exogenous variable " + model.name(u));
}

void check_intervention(const CausalModel& model,
                        const Intervention& intervention) {
  for (const auto& [v, s] : intervention) {
    if (v >= model.num_variables() || !model.is_endogenous(v))
      throw ModelError("interventions apply to endogenous variables only");
    if (!model.variable(v).in_domain(s))
      throw ModelError("intervention value '" + value_text(model, s) +
                       "' is not in the domain of " + model.name(v));
  }
}

Assignment evaluate_fixed(const CausalModel& model,
                          std::span<const Symbol> fixed) {
  std::vector<Symbol> values(fixed.begin(), fixed.end());
  for (VarId v : model.topological_order()) {
    if (values[v] != kNoValue) continue;
    const auto& eq = model.equation(v);
    if (!eq) throw ModelError("internal: no equation for " + model.name(v));
    values[v] = eval_expression(*eq, values);
  }
  for (VarId v = 0; v < values.size(); ++v)
    if (values[v] == kNoValue)
      throw ModelError("internal: variable " + model.name(v) + " left undefined");
  return Assignment(std::move(values));
}

Assignment evaluate(const CausalModel& model, const Context& context,
                    const Intervention& intervention) {
  check_context(model, context);
  check_intervention(model, intervention);
  std::vector<Symbol> fixed(model.num_variables(), kNoValue);
  for (const auto& [v, s] : context) fixed[v] = s;
  for (const auto& [v, s] : intervention) fixed[v] = s;
  return evaluate_fixed(model, fixed);
}

bool satisfies(const Assignment& assignment, const EventFormula& f) {
  return std::visit(
      overloaded{
          [&](const formula::Event& e) {
            if (e.var >= assignment.size())
              throw ModelError("formula refers to unknown variable #" +
                               std::to_string(e.var));
            return assignment[e.var] == e.value;
          },
          [&](const formula::Not& n) { return !satisfies(assignment, n.operand); },
          [&](const formula::And& a) {
            return satisfies(assignment, a.lhs) && satisfies(assignment, a.rhs);
          },
          [&](const formula::Or& o) {
            return satisfies(assignment, o.lhs) || satisfies(assignment, o.rhs);
          },
      },
      f.node().v);
}

CausalModel intervened_model(const CausalModel& model,
                             const Intervention& intervention) {
  check_intervention(model, intervention);
  std::vector<std::optional<Expression>> equations;
  equations.reserve(model.num_variables());
  for (VarId v = 0; v < model.num_variables(); ++v) {
    if (auto it = intervention.find(v); it != intervention.end())
      equations.emplace_back(Expression::constant(it->second));
    else
      equations.push_back(model.equation(v));
  }
  return CausalModel(model.symbol_table(), model.variables(), std::move(equations));
}

// ---------------------------------------------------------------------------

std::string format_assignment(const CausalModel& model, const Assignment& a,
                              bool endogenous_only) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (VarId v = 0; v < a.size(); ++v) {
    if (endogenous_only && !model.is_endogenous(v)) continue;
    os << (first ? "" : ", ") << model.name(v) << '=' << model.text(a[v]);
    first = false;
  }
  os << '}';
  return os.str();
}

std::string format_intervention(const CausalModel& model,
                                const Intervention& intervention) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& [v, s] : intervention) {
    os << (first ? "" : ", ") << model.name(v) << "<-" << model.text(s);
    first = false;
  }
  os << ']';
  return os.str();
}

std::string format_formula(const CausalModel& model, const EventFormula& f) {
  return std::visit(
      overloaded{
          [&](const formula::Event& e) {
            return model.name(e.var) + "=" + model.text(e.value);
          },
          [&](const formula::Not& n) {
            return "!(" + format_formula(model, n.operand) + ")";
          },
          [&](const formula::And& a) {
            return "(" + format_formula(model, a.lhs) + " & " +
                   format_formula(model, a.rhs) + ")";
          },
          [&](const formula::Or& o) {
            return "(" + format_formula(model, o.lhs) + " | " +
                   format_formula(model, o.rhs) + ")";
          },
      },
      f.node().v);
}

}  // namespace causal_cgs
