#pragma once

// Text format for causal settings.
//
//   exogenous U in {0,1}
//   agent A in {0,1}
//   eq A := U & !B
//   context U = 1
//   outcome ok : !A
//
// `#` and `//` start comments that run to the end of the line.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal_cgs/model.hpp"

namespace causal_cgs::dsl {

struct Location {
  int line = 1;
  int column = 1;

  friend bool operator==(const Location&, const Location&) = default;
};

std::string to_string(Location loc);  // "line:column"

class ParseError : public std::runtime_error {
 public:
  ParseError(Location where, const std::string& message);
  Location where() const { return where_; }
  const std::string& detail() const { return detail_; }

 private:
  Location where_;
  std::string detail_;
};

// Syntax tree of an expression, before names are resolved.
struct ExprAst {
  enum class Kind { atom, equals, negate, conj, disj, ite };
  Kind kind = Kind::atom;
  std::string text;   // atom: identifier or digits; equals: variable name
  std::string value;  // equals only
  std::vector<ExprAst> operands;
  Location loc;
};

struct Declaration {
  VarKind kind = VarKind::endogenous;
  bool agent = false;
  std::string name;
  std::vector<std::string> domain;
  Location loc;
};

struct EquationDecl {
  std::string target;
  ExprAst rhs;
  Location loc;
};

struct ContextSetting {
  std::string variable;
  std::string value;
  Location loc;
};

struct OutcomeDecl {
  std::string name;
  ExprAst formula;
  Location loc;
};

struct ModelDocument {
  std::vector<Declaration> declarations;
  std::vector<EquationDecl> equations;
  std::vector<ContextSetting> context;  // all context lines, in order
  bool has_context = false;
  std::vector<OutcomeDecl> outcomes;
};

// Throws ParseError on the first syntax error.
ModelDocument parse_model(std::string_view text);

struct SourceDiagnostic {
  Location loc;
  std::string kind;
  std::string variable;
  std::string message;
};

struct NamedOutcome {
  std::string name;
  EventFormula formula;
};

struct LoadedModel {
  CausalModel model;
  Context context;
  std::vector<NamedOutcome> outcomes;

  const NamedOutcome* outcome(std::string_view name) const;
};

struct LoadResult {
  std::optional<LoadedModel> loaded;  // set iff diagnostics is empty
  std::vector<SourceDiagnostic> diagnostics;
};

// Resolves names and runs validate_model. A bare identifier inside an
// expression is a variable if one is declared with that name, otherwise a
// value. Outcomes must be Boolean combinations of events; a bare Boolean
// variable X stands for X == 1.
LoadResult lower(const ModelDocument& doc);

// parse_model followed by lower; syntax errors become a single diagnostic.
LoadResult load_model(std::string_view text);

std::string format_diagnostic(const SourceDiagnostic& d);

}  // namespace causal_cgs::dsl
