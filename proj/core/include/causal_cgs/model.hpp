#pragma once

// Structural causal models: signature, structural equations, causal settings
// and interventions.
//
// Values are interned symbols shared by every variable of a model. The two
// Boolean symbols "0" and "1" are always interned first, so kFalse/kTrue can
// be compared directly against evaluated values.

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace causal_cgs {

using VarId = std::uint32_t;
using Symbol = std::uint32_t;

inline constexpr Symbol kFalse = 0;
inline constexpr Symbol kTrue = 1;
inline constexpr Symbol kNoValue = std::numeric_limits<Symbol>::max();

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SymbolTable {
 public:
  SymbolTable();

  Symbol intern(std::string_view text);
  std::optional<Symbol> find(std::string_view text) const;
  const std::string& text(Symbol s) const;
  std::size_t size() const { return texts_.size(); }

 private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, Symbol> ids_;
};

// ---------------------------------------------------------------------------
// Expressions (right-hand sides of structural equations)

struct ExprNode;

class Expression {
 public:
  static Expression constant(Symbol value);
  static Expression var(VarId v);
  static Expression equals(VarId v, Symbol value);
  static Expression negate(Expression e);
  static Expression conj(Expression lhs, Expression rhs);
  static Expression disj(Expression lhs, Expression rhs);
  static Expression ite(Expression cond, Expression then_branch,
                        Expression else_branch);

  const ExprNode& node() const { return *node_; }

 private:
  explicit Expression(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

namespace expr {
struct Constant { Symbol value; };
struct VarRef { VarId var; };
struct Equals { VarId var; Symbol value; };
struct Not { Expression operand; };
struct And { Expression lhs, rhs; };
struct Or { Expression lhs, rhs; };
struct IfThenElse { Expression cond, then_branch, else_branch; };
}  // namespace expr

struct ExprNode {
  std::variant<expr::Constant, expr::VarRef, expr::Equals, expr::Not,
               expr::And, expr::Or, expr::IfThenElse>
      v;
};

// Values are indexed by VarId; every referenced variable must be set.
Symbol eval_expression(const Expression& e, std::span<const Symbol> values);
void collect_variables(const Expression& e, std::set<VarId>& out);

// ---------------------------------------------------------------------------
// Event formulas: Boolean combinations of primitive events X = x.

struct FormulaNode;

class EventFormula {
 public:
  static EventFormula event(VarId v, Symbol value);
  static EventFormula negate(EventFormula f);
  static EventFormula conj(EventFormula lhs, EventFormula rhs);
  static EventFormula disj(EventFormula lhs, EventFormula rhs);

  const FormulaNode& node() const { return *node_; }

 private:
  explicit EventFormula(std::shared_ptr<const FormulaNode> n)
      : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

namespace formula {
struct Event { VarId var; Symbol value; };
struct Not { EventFormula operand; };
struct And { EventFormula lhs, rhs; };
struct Or { EventFormula lhs, rhs; };
}  // namespace formula

struct FormulaNode {
  std::variant<formula::Event, formula::Not, formula::And, formula::Or> v;
};

void collect_variables(const EventFormula& f, std::set<VarId>& out);

// ---------------------------------------------------------------------------
// Causal model

enum class VarKind { exogenous, endogenous };

struct Variable {
  std::string name;
  VarKind kind = VarKind::endogenous;
  std::vector<Symbol> domain;
  bool agent = false;

  bool in_domain(Symbol s) const;
  bool is_boolean() const;
};

using Context = std::map<VarId, Symbol>;
using Intervention = std::map<VarId, Symbol>;

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Symbol> values) : values_(std::move(values)) {}

  Symbol operator[](VarId v) const { return values_.at(v); }
  std::size_t size() const { return values_.size(); }
  std::span<const Symbol> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Symbol> values_;
};

class CausalModel {
 public:
  CausalModel(std::shared_ptr<const SymbolTable> symbols,
              std::vector<Variable> variables,
              std::vector<std::optional<Expression>> equations);

  std::size_t num_variables() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::string& name(VarId v) const { return variables_.at(v).name; }
  std::optional<VarId> find(std::string_view name) const;
  // Throws ModelError for unknown names.
  VarId id(std::string_view name) const;

  const SymbolTable& symbols() const { return *symbols_; }
  const std::shared_ptr<const SymbolTable>& symbol_table() const {
    return symbols_;
  }
  std::optional<Symbol> symbol(std::string_view text) const {
    return symbols_->find(text);
  }
  const std::string& text(Symbol s) const { return symbols_->text(s); }

  const std::optional<Expression>& equation(VarId v) const {
    return equations_.at(v);
  }

  bool is_endogenous(VarId v) const {
    return variables_.at(v).kind == VarKind::endogenous;
  }
  bool is_agent(VarId v) const { return variables_.at(v).agent; }

  // Declaration order.
  const std::vector<VarId>& exogenous() const { return exogenous_; }
  const std::vector<VarId>& endogenous() const { return endogenous_; }
  const std::vector<VarId>& agents() const { return agents_; }

  bool acyclic() const { return order_.has_value(); }
  // Endogenous variables in a topological order of the causal network.
  const std::vector<VarId>& topological_order() const;

 private:
  std::shared_ptr<const SymbolTable> symbols_;
  std::vector<Variable> variables_;
  std::vector<std::optional<Expression>> equations_;
  std::unordered_map<std::string, VarId> by_name_;
  std::vector<VarId> exogenous_, endogenous_, agents_;
  std::optional<std::vector<VarId>> order_;
};

// Incremental construction. The builder does not reject malformed models;
// validate_model reports what is wrong with the result.
class ModelBuilder {
 public:
  ModelBuilder();

  VarId exogenous(std::string name, std::vector<std::string> domain);
  VarId endogenous(std::string name, std::vector<std::string> domain);
  VarId agent(std::string name, std::vector<std::string> domain);
  void mark_agent(std::string_view name);

  VarId id(std::string_view name) const;
  Symbol sym(std::string_view text) { return symbols_->intern(text); }

  Expression var(std::string_view name) const { return Expression::var(id(name)); }
  Expression is(std::string_view name, std::string_view value) {
    return Expression::equals(id(name), sym(value));
  }
  Expression constant(std::string_view value) {
    return Expression::constant(sym(value));
  }

  ModelBuilder& equation(std::string_view name, Expression rhs);

  CausalModel build() const;

 private:
  VarId add(std::string name, VarKind kind, std::vector<std::string> domain,
            bool agent);

  std::shared_ptr<SymbolTable> symbols_;
  std::vector<Variable> variables_;
  std::vector<std::optional<Expression>> equations_;
};

// ---------------------------------------------------------------------------
// Operations

struct Diagnostic {
  enum class Kind {
    invalid_name,
    duplicate_variable,
    empty_domain,
    duplicate_value,
    missing_equation,
    unexpected_equation,
    agent_not_endogenous,
    unknown_variable,
    value_out_of_domain,
    non_boolean_operand,
    equation_range,
    cycle,
  };
  Kind kind;
  std::string variable;
  std::string message;
};

std::string_view to_string(Diagnostic::Kind k);

std::vector<Diagnostic> validate_model(const CausalModel& model);

Assignment evaluate(const CausalModel& model, const Context& context,
                    const Intervention& intervention = {});

// `fixed` is indexed by VarId; entries other than kNoValue are taken as given
// (context values for exogenous variables, interventions for endogenous ones).
// No domain checking: callers that already validated their inputs use this in
// inner search loops.
Assignment evaluate_fixed(const CausalModel& model,
                          std::span<const Symbol> fixed);

bool satisfies(const Assignment& assignment, const EventFormula& formula);

CausalModel intervened_model(const CausalModel& model,
                             const Intervention& intervention);

// Throws ModelError unless every key is endogenous and every value in domain.
void check_intervention(const CausalModel& model,
                        const Intervention& intervention);
void check_context(const CausalModel& model, const Context& context);

std::string format_assignment(const CausalModel& model, const Assignment& a,
                              bool endogenous_only = false);
std::string format_intervention(const CausalModel& model,
                                const Intervention& intervention);
std::string format_formula(const CausalModel& model, const EventFormula& f);

}  // namespace causal_cgs
