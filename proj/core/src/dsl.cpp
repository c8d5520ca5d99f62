#include "causal_cgs/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace causal_cgs::dsl {

std::string to_string(Location loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

ParseError::ParseError(Location where, const std::string& message)
    : std::runtime_error(to_string(where) + ": " + message), where_(where), detail_(message) {}

namespace {

enum class Tok {
  word,  // identifiers, keywords and digit strings
  lbrace, rbrace, lparen, rparen, comma, colon,
  assign,  // :=
  eq,      // =
  eqeq,    // ==
  bang, amp, bar,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  Location loc;
};

const std::set<std::string, std::less<>> kKeywords = {
    "exogenous", "endogenous", "agent", "in", "eq", "context",
    "outcome", "if", "then", "else"};

constexpr int kMaxNesting = 200;
// Binary operators per expression; left-deep chains deepen the tree too.
constexpr int kMaxChain = 10000;

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Location at = here();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, "", at});
        return out;
      }
      const unsigned char c = text_[pos_];
      if (std::isalnum(c) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          advance();
        out.push_back({Tok::word, std::string(text_.substr(start, pos_ - start)), at});
        continue;
      }
      advance();
      switch (c) {
        case '{': out.push_back({Tok::lbrace, "{", at}); break;
        case '}': out.push_back({Tok::rbrace, "}", at}); break;
        case '(': out.push_back({Tok::lparen, "(", at}); break;
        case ')': out.push_back({Tok::rparen, ")", at}); break;
        case ',': out.push_back({Tok::comma, ",", at}); break;
        case '!': out.push_back({Tok::bang, "!", at}); break;
        case '&': out.push_back({Tok::amp, "&", at}); break;
        case '|': out.push_back({Tok::bar, "|", at}); break;
        case ':':
          if (peek('=')) {
            advance();
            out.push_back({Tok::assign, ":=", at});
          } else {
            out.push_back({Tok::colon, ":", at});
          }
          break;
        case '=':
          if (peek('=')) {
            advance();
            out.push_back({Tok::eqeq, "==", at});
          } else {
            out.push_back({Tok::eq, "=", at});
          }
          break;
        default: {
          std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c))
                                              : "\\x" + hex(c);
          throw ParseError(at, "unexpected character '" + shown + "'");
        }
      }
    }
  }

 private:
  static std::string hex(unsigned char c) {
    const char* digits = "0123456789abcdef";
    return {digits[c >> 4], digits[c & 15]};
  }

  Location here() const { return {line_, col_}; }
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#' || (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ModelDocument document() {
    ModelDocument doc;
    while (cur().kind != Tok::end) {
      const Token& t = cur();
      if (t.kind != Tok::word) throw error("expected a declaration, equation, context or outcome");
      if (t.text == "exogenous" || t.text == "endogenous" || t.text == "agent") {
        doc.declarations.push_back(declaration());
      } else if (t.text == "eq") {
        doc.equations.push_back(equation());
      } else if (t.text == "context") {
        context(doc);
      } else if (t.text == "outcome") {
        doc.outcomes.push_back(outcome());
      } else {
        throw error("expected a declaration, equation, context or outcome");
      }
    }
    return doc;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  ParseError error(const std::string& what) const {
    return ParseError(cur().loc, what + ", found " + describe(cur()));
  }

  bool at_word(std::string_view w) const { return cur().kind == Tok::word && cur().text == w; }

  void expect(Tok k, const char* what) {
    if (cur().kind != k) throw error(std::string("expected ") + what);
    take();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) throw error("expected '" + std::string(w) + "'");
    take();
  }

  Token identifier(const char* what) {
    if (cur().kind != Tok::word || kKeywords.count(cur().text))
      throw error(std::string("expected ") + what);
    if (std::isdigit(static_cast<unsigned char>(cur().text[0])))
      throw error(std::string("expected ") + what + " (names cannot start with a digit)");
    return take();
  }

  Token value() {
    if (cur().kind != Tok::word || kKeywords.count(cur().text)) throw error("expected a value");
    return take();
  }

  Declaration declaration() {
    Declaration d;
    Token kw = take();
    d.loc = kw.loc;
    d.kind = kw.text == "exogenous" ? VarKind::exogenous : VarKind::endogenous;
    d.agent = kw.text == "agent";
    d.name = identifier("a variable name").text;
    expect_word("in");
    expect(Tok::lbrace, "'{'");
    d.domain.push_back(value().text);
    while (cur().kind == Tok::comma) {
      take();
      d.domain.push_back(value().text);
    }
    expect(Tok::rbrace, "'}'");
    return d;
  }

  EquationDecl equation() {
    EquationDecl e;
    e.loc = take().loc;
    e.target = identifier("a variable name").text;
    expect(Tok::assign, "':='");
    operators_ = 0;
    e.rhs = expression(0);
    return e;
  }

  void context(ModelDocument& doc) {
    take();
    doc.has_context = true;
    for (;;) {
      ContextSetting s;
      Token name = identifier("an exogenous variable");
      s.variable = name.text;
      s.loc = name.loc;
      expect(Tok::eq, "'='");
      s.value = value().text;
      doc.context.push_back(std::move(s));
      if (cur().kind != Tok::comma) break;
      take();
    }
  }

  OutcomeDecl outcome() {
    OutcomeDecl o;
    o.loc = take().loc;
    o.name = identifier("an outcome name").text;
    expect(Tok::colon, "':'");
    operators_ = 0;
    o.formula = expression(0);
    return o;
  }

  // expr := or ; or := and ("|" and)* ; and := unary ("&" unary)*
  ExprAst expression(int depth) {
    if (depth > kMaxNesting) throw error("expression nested too deeply");
    ExprAst lhs = conjunction(depth);
    while (cur().kind == Tok::bar) {
      if (++operators_ > kMaxChain) throw error("expression has too many operators");
      ExprAst node;
      node.kind = ExprAst::Kind::disj;
      node.loc = take().loc;
      node.operands.push_back(std::move(lhs));
      node.operands.push_back(conjunction(depth));
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprAst conjunction(int depth) {
    ExprAst lhs = unary(depth);
    while (cur().kind == Tok::amp) {
      if (++operators_ > kMaxChain) throw error("expression has too many operators");
      ExprAst node;
      node.kind = ExprAst::Kind::conj;
      node.loc = take().loc;
      node.operands.push_back(std::move(lhs));
      node.operands.push_back(unary(depth));
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprAst unary(int depth) {
    if (depth > kMaxNesting) throw error("expression nested too deeply");
    const Token& t = cur();
    if (t.kind == Tok::bang) {
      ExprAst node;
      node.kind = ExprAst::Kind::negate;
      node.loc = take().loc;
      node.operands.push_back(unary(depth + 1));
      return node;
    }
    if (t.kind == Tok::lparen) {
      take();
      ExprAst inner = expression(depth + 1);
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (at_word("if")) {
      ExprAst node;
      node.kind = ExprAst::Kind::ite;
      node.loc = take().loc;
      node.operands.push_back(expression(depth + 1));
      expect_word("then");
      node.operands.push_back(expression(depth + 1));
      expect_word("else");
      node.operands.push_back(expression(depth + 1));
      return node;
    }
    if (t.kind != Tok::word || kKeywords.count(t.text)) throw error("expected an expression");
    Token atom = take();
    ExprAst node;
    node.loc = atom.loc;
    node.text = atom.text;
    if (cur().kind == Tok::eqeq) {
      if (std::isdigit(static_cast<unsigned char>(atom.text[0])))
        throw ParseError(atom.loc, "left side of '==' must be a variable");
      take();
      node.kind = ExprAst::Kind::equals;
      node.value = value().text;
    }
    return node;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int operators_ = 0;
};

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

class Lowering {
 public:
  explicit Lowering(const ModelDocument& doc) : doc_(doc) {}

  LoadResult run() {
    for (const auto& d : doc_.declarations) {
      if (d.kind == VarKind::exogenous)
        builder_.exogenous(d.name, d.domain);
      else if (d.agent)
        builder_.agent(d.name, d.domain);
      else
        builder_.endogenous(d.name, d.domain);
      declared_.emplace(d.name, &d);  // first declaration wins
      for (const auto& v : d.domain) values_.insert(v);
    }

    std::set<std::string> defined;
    for (const auto& e : doc_.equations) {
      auto it = declared_.find(e.target);
      if (it == declared_.end()) {
        report(e.loc, "unknown-variable", e.target,
               "equation for undeclared variable '" + e.target + "'");
        continue;
      }
      if (!defined.insert(e.target).second) {
        report(e.loc, "duplicate-equation", e.target,
               "second equation for '" + e.target + "'");
        continue;
      }
      equation_loc_.emplace(e.target, e.loc);
      if (auto rhs = lower_expression(e.rhs)) builder_.equation(e.target, std::move(*rhs));
    }

    std::optional<CausalModel> model;
    if (diags_.empty()) {
      model.emplace(builder_.build());
      for (const auto& d : validate_model(*model)) {
        report(location_of(d), std::string(to_string(d.kind)), d.variable, d.message);
      }
    }

    LoadResult result;
    if (!diags_.empty()) {
      result.diagnostics = std::move(diags_);
      return result;
    }

    Context context = lower_context(*model);
    std::vector<NamedOutcome> outcomes;
    std::set<std::string> names;
    for (const auto& o : doc_.outcomes) {
      if (!names.insert(o.name).second) {
        report(o.loc, "duplicate-outcome", "", "outcome '" + o.name + "' defined twice");
        continue;
      }
      if (auto f = lower_formula(*model, o.formula))
        outcomes.push_back({o.name, std::move(*f)});
    }
    if (!diags_.empty()) {
      result.diagnostics = std::move(diags_);
      return result;
    }
    result.loaded = LoadedModel{std::move(*model), std::move(context), std::move(outcomes)};
    return result;
  }

 private:
  void report(Location loc, std::string kind, std::string var, std::string message) {
    diags_.push_back({loc, std::move(kind), std::move(var), std::move(message)});
  }

  Location location_of(const Diagnostic& d) const {
    using K = Diagnostic::Kind;
    const bool about_equation = d.kind == K::unknown_variable ||
                                d.kind == K::value_out_of_domain ||
                                d.kind == K::non_boolean_operand ||
                                d.kind == K::equation_range ||
                                d.kind == K::unexpected_equation || d.kind == K::cycle;
    if (about_equation)
      if (auto it = equation_loc_.find(d.variable); it != equation_loc_.end()) return it->second;
    if (d.kind == K::duplicate_variable) {
      // Point at the second declaration.
      int seen = 0;
      for (const auto& decl : doc_.declarations)
        if (decl.name == d.variable && seen++ == 1) return decl.loc;
    }
    if (auto it = declared_.find(d.variable); it != declared_.end()) return it->second->loc;
    return {};
  }

  std::optional<Expression> lower_expression(const ExprAst& e) {
    using K = ExprAst::Kind;
    switch (e.kind) {
      case K::atom: {
        if (declared_.count(e.text)) return builder_.var(e.text);
        if (all_digits(e.text) || values_.count(e.text)) return builder_.constant(e.text);
        report(e.loc, "unknown-identifier", e.text,
               "'" + e.text + "' is neither a declared variable nor a domain value");
        return std::nullopt;
      }
      case K::equals: {
        if (!declared_.count(e.text)) {
          report(e.loc, "unknown-identifier", e.text, "unknown variable '" + e.text + "'");
          return std::nullopt;
        }
        return builder_.is(e.text, e.value);
      }
      case K::negate: {
        auto x = lower_expression(e.operands[0]);
        if (!x) return std::nullopt;
        return Expression::negate(std::move(*x));
      }
      case K::conj:
      case K::disj: {
        auto l = lower_expression(e.operands[0]);
        auto r = lower_expression(e.operands[1]);
        if (!l || !r) return std::nullopt;
        return e.kind == K::conj ? Expression::conj(std::move(*l), std::move(*r))
                                 : Expression::disj(std::move(*l), std::move(*r));
      }
      case K::ite: {
        auto c = lower_expression(e.operands[0]);
        auto t = lower_expression(e.operands[1]);
        auto f = lower_expression(e.operands[2]);
        if (!c || !t || !f) return std::nullopt;
        return Expression::ite(std::move(*c), std::move(*t), std::move(*f));
      }
    }
    return std::nullopt;
  }

  Context lower_context(const CausalModel& model) {
    Context ctx;
    for (const auto& s : doc_.context) {
      auto v = model.find(s.variable);
      if (!v || model.is_endogenous(*v)) {
        report(s.loc, "context", s.variable,
               "'" + s.variable + "' is not an exogenous variable");
        continue;
      }
      auto sym = model.symbol(s.value);
      if (!sym || !model.variable(*v).in_domain(*sym)) {
        report(s.loc, "value-out-of-domain", s.variable,
               "'" + s.value + "' is not in the domain of " + s.variable);
        continue;
      }
      if (!ctx.emplace(*v, *sym).second)
        report(s.loc, "context", s.variable, "'" + s.variable + "' is set twice");
    }
    if (doc_.has_context) {
      for (VarId u : model.exogenous()) {
        if (!ctx.count(u)) {
          Location at = doc_.context.empty() ? Location{} : doc_.context.front().loc;
          report(at, "context", model.name(u), "context leaves " + model.name(u) + " unset");
        }
      }
    }
    return ctx;
  }

  std::optional<EventFormula> lower_formula(const CausalModel& model, const ExprAst& e) {
    using K = ExprAst::Kind;
    switch (e.kind) {
      case K::atom: {
        auto v = model.find(e.text);
        if (!v) {
          report(e.loc, "outcome", e.text,
                 "outcome formulas are built from events; '" + e.text + "' is not a variable");
          return std::nullopt;
        }
        if (!model.variable(*v).is_boolean()) {
          report(e.loc, "outcome", e.text,
                 "'" + e.text + "' is not Boolean; write " + e.text + " == value");
          return std::nullopt;
        }
        return EventFormula::event(*v, kTrue);
      }
      case K::equals: {
        auto v = model.find(e.text);
        if (!v) {
          report(e.loc, "unknown-identifier", e.text, "unknown variable '" + e.text + "'");
          return std::nullopt;
        }
        auto sym = model.symbol(e.value);
        if (!sym || !model.variable(*v).in_domain(*sym)) {
          report(e.loc, "value-out-of-domain", e.text,
                 "'" + e.value + "' is not in the domain of " + e.text);
          return std::nullopt;
        }
        return EventFormula::event(*v, *sym);
      }
      case K::negate: {
        auto x = lower_formula(model, e.operands[0]);
        if (!x) return std::nullopt;
        return EventFormula::negate(std::move(*x));
      }
      case K::conj:
      case K::disj: {
        auto l = lower_formula(model, e.operands[0]);
        auto r = lower_formula(model, e.operands[1]);
        if (!l || !r) return std::nullopt;
        return e.kind == K::conj ? EventFormula::conj(std::move(*l), std::move(*r))
                                 : EventFormula::disj(std::move(*l), std::move(*r));
      }
      case K::ite:
        report(e.loc, "outcome", "", "if-expressions are not allowed in outcome formulas");
        return std::nullopt;
    }
    return std::nullopt;
  }

  const ModelDocument& doc_;
  ModelBuilder builder_;
  std::map<std::string, const Declaration*> declared_;
  std::map<std::string, Location> equation_loc_;
  std::set<std::string> values_;
  std::vector<SourceDiagnostic> diags_;
};

}  // namespace

ModelDocument parse_model(std::string_view text) {
  return Parser(Lexer(text).run()).document();
}

const NamedOutcome* LoadedModel::outcome(std::string_view name) const {
  for (const auto& o : outcomes)
    if (o.name == name) return &o;
  return nullptr;
}

LoadResult lower(const ModelDocument& doc) { return Lowering(doc).run(); }

LoadResult load_model(std::string_view text) {
  try {
    return lower(parse_model(text));
  } catch (const ParseError& e) {
    LoadResult r;
    r.diagnostics.push_back({e.where(), "syntax", "", e.detail()});
    return r;
  }
}

std::string format_diagnostic(const SourceDiagnostic& d) {
  return to_string(d.loc) + ": " + d.kind + ": " + d.message;
}

}  // namespace causal_cgs::dsl
