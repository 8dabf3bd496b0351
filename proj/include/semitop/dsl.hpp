// The artifact's user surface: a small declaration language for semilinear
// sets and families over Gamma_inf, a command list, and JSON reporting.
//
// Formulas are interpreted stratum by stratum.  Atoms are normalized so
// both sides carry nonnegative coefficients; a side containing a variable
// that sits at inf evaluates to inf, and comparisons against inf collapse
// to constants.  Quantifiers range over Gamma_inf: the finite branch is
// eliminated by Fourier-Motzkin, the inf branch by substitution.
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "semitop/celldec.hpp"
#include "semitop/cohom.hpp"
#include "semitop/errors.hpp"
#include "semitop/family.hpp"
#include "semitop/qlin.hpp"
#include "semitop/stratal.hpp"

namespace semitop::dsl {

using Json = nlohmann::ordered_json;
using stratal::SemilinearSet;

struct Span {
  int line = 1, col = 1;
  std::string str() const {
    return "line " + std::to_string(line) + ", col " + std::to_string(col);
  }
};

struct ParseError : std::runtime_error {
  Span span;
  ParseError(const Span& s, const std::string& msg)
      : std::runtime_error(s.str() + ": " + msg), span(s) {}
};

// ---------------------------------------------------------------------------
// AST

struct LinTerm {
  std::map<std::string, Rat> coeffs;
  Rat constant = 0;
  Span span;

  std::string print() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [name, c] : coeffs) {
      if (c == 0) continue;
      if (!first) os << (c > 0 ? " + " : " - ");
      else if (c < 0) os << "-";
      Rat a = c > 0 ? c : Rat(-c);
      if (a != 1) os << rat_to_string(a) << "*";
      os << name;
      first = false;
    }
    if (first || constant != 0) {
      if (!first) os << (constant >= 0 ? " + " : " - ");
      else if (constant < 0) os << "-";
      Rat a = constant >= 0 ? constant : Rat(-constant);
      os << rat_to_string(a);
    }
    return os.str();
  }
};

enum class RelOp { LT, LE, EQ, GE, GT };

struct Formula;
using FormulaPtr = std::shared_ptr<Formula>;

struct Formula {
  enum class Kind { Atom, Not, And, Or, Exists, ForAll } kind;
  // Atom
  LinTerm lhs, rhs;
  RelOp rel = RelOp::LE;
  // Not / quantifiers: child a; And/Or: a, b
  FormulaPtr a, b;
  std::string var;  // quantifier variable
  Span span;

  std::string print() const {
    switch (kind) {
      case Kind::Atom: {
        static const char* rels[] = {"<", "<=", "=", ">=", ">"};
        return lhs.print() + " " + rels[static_cast<int>(rel)] + " " + rhs.print();
      }
      case Kind::Not:
        return "not (" + a->print() + ")";
      case Kind::And:
        return "(" + a->print() + " /\\ " + b->print() + ")";
      case Kind::Or:
        return "(" + a->print() + " \\/ " + b->print() + ")";
      case Kind::Exists:
        return "exists " + var + " . (" + a->print() + ")";
      case Kind::ForAll:
        return "forall " + var + " . (" + a->print() + ")";
    }
    return "";
  }
};

struct SetExpr;
using SetExprPtr = std::shared_ptr<SetExpr>;

struct SetExpr {
  enum class Kind { Brace, Union, Intersect, Minus, Closure, Interior, Ref } kind;
  // Brace
  std::vector<std::string> tuple;  // "inf" marks a pinned position
  FormulaPtr formula;
  // binary / unary
  SetExprPtr a, b;
  // Ref
  std::string name;
  Span span;

  std::string print() const {
    switch (kind) {
      case Kind::Brace: {
        std::string t;
        for (size_t i = 0; i < tuple.size(); ++i) t += (i ? ", " : "") + tuple[i];
        return "{ (" + t + ") | " + formula->print() + " }";
      }
      case Kind::Union:
        return "(" + a->print() + " union " + b->print() + ")";
      case Kind::Intersect:
        return "(" + a->print() + " intersect " + b->print() + ")";
      case Kind::Minus:
        return "(" + a->print() + " minus " + b->print() + ")";
      case Kind::Closure:
        return "closure " + a->print();
      case Kind::Interior:
        return "interior " + a->print();
      case Kind::Ref:
        return name;
    }
    return "";
  }
};

struct Decl {
  bool is_family = false;
  std::string name;
  int ambient = 0;
  std::string param;  // family only
  SetExprPtr expr;
  Span span;
};

struct CellComp {
  enum class Kind { Point, Inf, Band } kind;
  LinTerm value;            // Point
  std::optional<LinTerm> lo, hi;  // Band: absent lo = -inf, absent hi = inf
};

struct Command {
  enum class Kind {
    Check, Components, Betti, BettiC, Closure, Mv, Homotopy, Scan, Table
  } kind;
  std::vector<std::string> names;  // referenced set names
  std::string predicate;           // check
  ExtRat a{Rat(0)}, b{Rat(0)};     // homotopy endpoints
  std::string param;               // scan
  std::vector<CellComp> cell;      // table
  Rat t = 0, s = 0;                // table
  Span span;

  std::string print() const {
    switch (kind) {
      case Kind::Check: return "check " + names[0] + " " + predicate + ";";
      case Kind::Components: return "components " + names[0] + ";";
      case Kind::Betti: return "betti " + names[0] + ";";
      case Kind::BettiC: return "betti_c " + names[0] + ";";
      case Kind::Closure: return "closure " + names[0] + ";";
      case Kind::Mv: return "mv " + names[0] + " " + names[1] + " " + names[2] + ";";
      case Kind::Homotopy:
        return "homotopy " + names[0] + " " + a.str() + " " + b.str() + ";";
      case Kind::Scan: return "scan " + names[0] + " by " + param + ";";
      case Kind::Table: {
        std::string out = "table cell(";
        for (size_t i = 0; i < cell.size(); ++i) {
          if (i) out += ", ";
          const CellComp& cc = cell[i];
          if (cc.kind == CellComp::Kind::Point) out += "pt " + cc.value.print();
          else if (cc.kind == CellComp::Kind::Inf) out += "inf";
          else {
            out += "band(" + (cc.lo ? cc.lo->print() : std::string("-inf")) + ", " +
                   (cc.hi ? cc.hi->print() : std::string("inf")) + ")";
          }
        }
        return out + ") " + rat_to_string(t) + " " + rat_to_string(s) + ";";
      }
    }
    return "";
  }
};

struct Script {
  std::vector<Decl> decls;
  std::vector<Command> commands;

  std::string print() const {
    std::string out;
    for (const Decl& d : decls) {
      out += d.is_family ? "family " : "set ";
      out += d.name + " in G^" + std::to_string(d.ambient);
      if (d.is_family) out += " by " + d.param;
      out += " = " + d.expr->print() + ";\n";
    }
    for (const Command& c : commands) out += c.print() + "\n";
    return out;
  }
};

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Symbol, End } kind = Kind::End;
  std::string text;
  Span span;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (src[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += k;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span sp{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Token::Kind::Ident, src.substr(i, j - i), sp});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::Number, src.substr(i, j - i), sp});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "/\\" || two == "\\/" || two == "<=" || two == ">=") {
      out.push_back({Token::Kind::Symbol, two, sp});
      advance(2);
      continue;
    }
    static const std::string singles = "{}()|,;.^+-*/<>=";
    if (singles.find(c) != std::string::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), sp});
      advance(1);
      continue;
    }
    throw ParseError(sp, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Script script() {
    Script s;
    while (!at_end()) {
      if (peek_is("set") || peek_is("family"))
        s.decls.push_back(decl());
      else
        s.commands.push_back(command());
    }
    return s;
  }

 private:
  const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool peek_is(const std::string& t) const { return peek().text == t; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Token expect(const std::string& t, const std::string& what) {
    if (peek().text != t)
      throw ParseError(peek().span, "expected '" + t + "' " + what + ", found '" +
                                        (at_end() ? "<end>" : peek().text) + "'");
    return take();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Token::Kind::Ident)
      throw ParseError(peek().span, "expected " + what);
    return take().text;
  }

  long integer() {
    if (peek().kind != Token::Kind::Number)
      throw ParseError(peek().span, "expected an integer");
    return std::stol(take().text);
  }

  Rat rational() {
    bool neg = false;
    if (peek_is("-")) {
      take();
      neg = true;
    }
    long num = integer();
    long den = 1;
    if (peek_is("/")) {
      take();
      den = integer();
      if (den == 0) throw ParseError(peek().span, "zero denominator");
    }
    Rat r(num, den);
    return neg ? Rat(-r) : r;
  }

  ExtRat ext_rational() {
    if (peek_is("inf")) {
      take();
      return ExtRat::infinity();
    }
    return ExtRat(rational());
  }

  Decl decl() {
    Decl d;
    d.span = peek().span;
    d.is_family = take().text == "family";
    d.name = ident("a declaration name");
    expect("in", "after the name");
    expect("G", "as the ambient space");
    expect("^", "in G^n");
    d.ambient = static_cast<int>(integer());
    if (d.is_family) {
      expect("by", "naming the family parameter");
      d.param = ident("the parameter coordinate");
    }
    expect("=", "before the set expression");
    d.expr = set_expr();
    expect(";", "after the declaration");
    return d;
  }

  SetExprPtr set_expr() {
    SetExprPtr lhs = set_atom();
    while (peek_is("union") || peek_is("intersect") || peek_is("minus")) {
      auto op = take();
      auto e = std::make_shared<SetExpr>();
      e->span = op.span;
      e->kind = op.text == "union" ? SetExpr::Kind::Union
                : op.text == "intersect" ? SetExpr::Kind::Intersect
                                         : SetExpr::Kind::Minus;
      e->a = lhs;
      e->b = set_atom();
      lhs = e;
    }
    return lhs;
  }

  SetExprPtr set_atom() {
    auto e = std::make_shared<SetExpr>();
    e->span = peek().span;
    if (peek_is("closure") || peek_is("interior")) {
      e->kind = take().text == "closure" ? SetExpr::Kind::Closure : SetExpr::Kind::Interior;
      e->a = set_atom();
      return e;
    }
    if (peek_is("(")) {
      take();
      auto inner = set_expr();
      expect(")", "closing the grouped set expression");
      return inner;
    }
    if (peek_is("{")) {
      take();
      e->kind = SetExpr::Kind::Brace;
      expect("(", "opening the tuple");
      while (true) {
        if (peek_is("inf")) {
          take();
          e->tuple.push_back("inf");
        } else {
          e->tuple.push_back(ident("a tuple coordinate (identifier or inf)"));
        }
        if (peek_is(",")) {
          take();
          continue;
        }
        break;
      }
      expect(")", "closing the tuple");
      expect("|", "between tuple and formula");
      e->formula = formula();
      expect("}", "closing the set comprehension");
      return e;
    }
    e->kind = SetExpr::Kind::Ref;
    e->name = ident("a set name or set expression");
    return e;
  }

  FormulaPtr formula() { return formula_or(); }

  FormulaPtr formula_or() {
    FormulaPtr lhs = formula_and();
    while (peek_is("\\/")) {
      auto op = take();
      auto f = std::make_shared<Formula>();
      f->span = op.span;
      f->kind = Formula::Kind::Or;
      f->a = lhs;
      f->b = formula_and();
      lhs = f;
    }
    return lhs;
  }

  FormulaPtr formula_and() {
    FormulaPtr lhs = formula_unary();
    while (peek_is("/\\")) {
      auto op = take();
      auto f = std::make_shared<Formula>();
      f->span = op.span;
      f->kind = Formula::Kind::And;
      f->a = lhs;
      f->b = formula_unary();
      lhs = f;
    }
    return lhs;
  }

  FormulaPtr formula_unary() {
    auto f = std::make_shared<Formula>();
    f->span = peek().span;
    if (peek_is("not")) {
      take();
      f->kind = Formula::Kind::Not;
      f->a = formula_unary();
      return f;
    }
    if (peek_is("exists") || peek_is("forall")) {
      f->kind = take().text == "exists" ? Formula::Kind::Exists : Formula::Kind::ForAll;
      f->var = ident("a quantified variable");
      expect(".", "after the quantified variable");
      f->a = formula();  // quantifier scope extends to the right
      return f;
    }
    if (peek_is("(")) {
      take();
      auto inner = formula();
      expect(")", "closing the grouped formula");
      return inner;
    }
    // atom
    f->kind = Formula::Kind::Atom;
    f->lhs = linterm();
    if (peek_is("<")) f->rel = RelOp::LT;
    else if (peek_is("<=")) f->rel = RelOp::LE;
    else if (peek_is("=")) f->rel = RelOp::EQ;
    else if (peek_is(">=")) f->rel = RelOp::GE;
    else if (peek_is(">")) f->rel = RelOp::GT;
    else throw ParseError(peek().span, "expected a relation (<, <=, =, >=, >)");
    take();
    f->rhs = linterm();
    return f;
  }

  LinTerm linterm() {
    LinTerm t;
    t.span = peek().span;
    bool first = true;
    while (true) {
      Rat sign(1);
      if (peek_is("+") || peek_is("-")) {
        if (take().text == "-") sign = -1;
      } else if (!first) {
        break;
      }
      if (peek().kind == Token::Kind::Number) {
        Rat value = rational();
        if (peek_is("*")) {
          take();
          std::string name = ident("a variable after '*'");
          t.coeffs[name] += sign * value;
        } else if (peek().kind == Token::Kind::Ident && !reserved(peek().text)) {
          std::string name = take().text;
          t.coeffs[name] += sign * value;
        } else {
          t.constant += sign * value;
        }
      } else if (peek().kind == Token::Kind::Ident && !reserved(peek().text)) {
        if (peek_is("inf"))
          throw ParseError(peek().span, "inf is not allowed in a linear term");
        std::string name = take().text;
        t.coeffs[name] += sign;
      } else {
        throw ParseError(peek().span, "expected a linear term");
      }
      first = false;
      if (!peek_is("+") && !peek_is("-")) break;
    }
    return t;
  }

  static bool reserved(const std::string& w) {
    static const std::set<std::string> words{
        "set", "family", "in", "by", "union", "intersect", "minus", "closure",
        "interior", "not", "exists", "forall", "inf", "check", "components",
        "betti", "betti_c", "mv", "homotopy", "scan", "table", "cell", "pt", "band"};
    return words.count(w) > 0 && w != "inf";  // inf handled separately
  }

  Command command() {
    Command c;
    c.span = peek().span;
    std::string head = ident("a command");
    if (head == "check") {
      c.kind = Command::Kind::Check;
      c.names.push_back(ident("a set name"));
      c.predicate = ident("a predicate (open|closed|locally_closed|bounded|compact)");
      static const std::set<std::string> preds{"open", "closed", "locally_closed",
                                               "bounded", "compact"};
      if (!preds.count(c.predicate))
        throw ParseError(c.span, "unknown predicate '" + c.predicate + "'");
    } else if (head == "components") {
      c.kind = Command::Kind::Components;
      c.names.push_back(ident("a set name"));
    } else if (head == "betti") {
      c.kind = Command::Kind::Betti;
      c.names.push_back(ident("a set name"));
    } else if (head == "betti_c") {
      c.kind = Command::Kind::BettiC;
      c.names.push_back(ident("a set name"));
    } else if (head == "closure") {
      c.kind = Command::Kind::Closure;
      c.names.push_back(ident("a set name"));
    } else if (head == "mv") {
      c.kind = Command::Kind::Mv;
      c.names.push_back(ident("the whole set"));
      c.names.push_back(ident("the first closed piece"));
      c.names.push_back(ident("the second closed piece"));
    } else if (head == "homotopy") {
      c.kind = Command::Kind::Homotopy;
      c.names.push_back(ident("a set name"));
      c.a = ext_rational();
      c.b = ext_rational();
    } else if (head == "scan") {
      c.kind = Command::Kind::Scan;
      c.names.push_back(ident("a family or set name"));
      expect("by", "naming the parameter");
      c.param = ident("the parameter coordinate");
    } else if (head == "table") {
      c.kind = Command::Kind::Table;
      expect("cell", "introducing the cell spec");
      expect("(", "opening the cell spec");
      while (true) {
        CellComp cc;
        if (peek_is("pt")) {
          take();
          cc.kind = CellComp::Kind::Point;
          cc.value = linterm();
        } else if (peek_is("inf")) {
          take();
          cc.kind = CellComp::Kind::Inf;
        } else if (peek_is("band")) {
          take();
          cc.kind = CellComp::Kind::Band;
          expect("(", "opening the band bounds");
          if (peek_is("-") && peek(1).text == "inf") {
            take();
            take();
          } else {
            cc.lo = linterm();
          }
          expect(",", "between the band bounds");
          if (peek_is("inf")) {
            take();
          } else {
            cc.hi = linterm();
          }
          expect(")", "closing the band bounds");
        } else {
          throw ParseError(peek().span, "expected pt, band or inf in the cell spec");
        }
        c.cell.push_back(std::move(cc));
        if (peek_is(",")) {
          take();
          continue;
        }
        break;
      }
      expect(")", "closing the cell spec");
      c.t = rational();
      c.s = rational();
    } else {
      throw ParseError(c.span, "unknown command '" + head + "'");
    }
    expect(";", "after the command");
    return c;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace detail

inline Script parse(const std::string& text) { return detail::Parser(text).script(); }

// ---------------------------------------------------------------------------
// Formula evaluation over Gamma_inf, stratum by stratum.

namespace detail {

struct EvalContext {
  std::map<std::string, int> names;  // in-scope variable -> index
  std::map<int, bool> at_inf;        // index -> sits at inf
  std::set<int> scope;               // finite indices in scope
  int next_index = 0;
};

inline qlin::Region eval_formula(const Formula& f, EvalContext ctx);

inline qlin::Region eval_atom(const Formula& f, const EvalContext& ctx) {
  // assemble lhs - rhs over variable indices
  qlin::LinForm form(f.lhs.constant - f.rhs.constant);
  auto add = [&](const LinTerm& t, int sgn) {
    for (auto& [name, c] : t.coeffs) {
      auto it = ctx.names.find(name);
      if (it == ctx.names.end())
        throw ParseError(t.span, "unknown variable '" + name + "'");
      form.set_coeff(it->second, form.coeff(it->second) + sgn * c);
    }
  };
  add(f.lhs, 1);
  add(f.rhs, -1);

  RelOp rel = f.rel;
  if (rel == RelOp::GE || rel == RelOp::GT) {  // flip to <= / <
    form = Rat(-1) * form;
    rel = rel == RelOp::GE ? RelOp::LE : RelOp::LT;
  }
  // after normalization the positive-coefficient variables sit on the left
  bool lhs_inf = false, rhs_inf = false;
  for (auto& [v, c] : form.coeffs()) {
    if (!ctx.at_inf.at(v)) continue;
    (c > 0 ? lhs_inf : rhs_inf) = true;
  }
  bool truth, decided = true;
  if (lhs_inf && rhs_inf) {
    truth = rel != RelOp::LT;  // inf <= inf, inf = inf hold; inf < inf fails
  } else if (lhs_inf) {
    truth = false;  // inf on the small side never satisfies <, <=, =
  } else if (rhs_inf) {
    truth = rel != RelOp::EQ;  // finite < inf and <= inf hold; = inf fails
  } else {
    decided = false;
    truth = false;
  }
  if (decided)
    return truth ? qlin::Region::full(ctx.scope) : qlin::Region::empty(ctx.scope);

  qlin::LinForm finite;
  finite.set_constant(form.constant());
  for (auto& [v, c] : form.coeffs())
    if (!ctx.at_inf.at(v)) finite.set_coeff(v, c);
  qlin::Rel r = rel == RelOp::LT ? qlin::Rel::LT
                : rel == RelOp::LE ? qlin::Rel::LE
                                   : qlin::Rel::EQ;
  return qlin::Region::of(ctx.scope, {qlin::Atom(finite, r)});
}

inline qlin::Region eval_formula(const Formula& f, EvalContext ctx) {
  switch (f.kind) {
    case Formula::Kind::Atom:
      return eval_atom(f, ctx);
    case Formula::Kind::Not:
      return qlin::complement(eval_formula(*f.a, ctx));
    case Formula::Kind::And:
      return qlin::intersect(eval_formula(*f.a, ctx), eval_formula(*f.b, ctx));
    case Formula::Kind::Or:
      return qlin::unite(eval_formula(*f.a, ctx), eval_formula(*f.b, ctx));
    case Formula::Kind::Exists: {
      int idx = ctx.next_index++;
      EvalContext fin = ctx;
      fin.names[f.var] = idx;
      fin.at_inf[idx] = false;
      fin.scope.insert(idx);
      qlin::Region finite_branch = qlin::fm_eliminate(eval_formula(*f.a, fin), idx);
      EvalContext top = ctx;
      top.next_index = fin.next_index;
      top.names[f.var] = idx;
      top.at_inf[idx] = true;
      qlin::Region inf_branch = eval_formula(*f.a, top);
      return qlin::unite(finite_branch, inf_branch);
    }
    case Formula::Kind::ForAll: {
      Formula neg;
      neg.kind = Formula::Kind::Not;
      neg.a = f.a;
      Formula ex;
      ex.kind = Formula::Kind::Exists;
      ex.var = f.var;
      ex.a = std::make_shared<Formula>(neg);
      Formula outer;
      outer.kind = Formula::Kind::Not;
      outer.a = std::make_shared<Formula>(ex);
      return eval_formula(outer, ctx);
    }
  }
  return qlin::Region::empty(ctx.scope);
}

inline SemilinearSet eval_brace(const SetExpr& e) {
  int n = static_cast<int>(e.tuple.size());
  if (n > 16) throw ParseError(e.span, "tuple arity above the supported 16");
  std::map<std::string, int> position;
  std::vector<int> free_positions;
  for (int i = 0; i < n; ++i) {
    if (e.tuple[i] == "inf") continue;
    if (position.count(e.tuple[i]))
      throw ParseError(e.span, "duplicate tuple variable '" + e.tuple[i] + "'");
    position[e.tuple[i]] = i;
    free_positions.push_back(i);
  }
  SemilinearSet out(n);
  for (std::uint32_t pat = 0; pat < (1u << free_positions.size()); ++pat) {
    EvalContext ctx;
    ctx.next_index = n;
    stratal::Mask L = 0;
    for (int i = 0; i < n; ++i) ctx.at_inf[i] = true;
    for (size_t k = 0; k < free_positions.size(); ++k) {
      int i = free_positions[k];
      bool finite = (pat & (1u << k)) != 0;
      ctx.at_inf[i] = !finite;
      if (finite) {
        L |= stratal::Mask(1) << i;
        ctx.scope.insert(i);
      }
    }
    for (auto& [name, i] : position) ctx.names[name] = i;
    qlin::Region r = eval_formula(*e.formula, ctx);
    out.set_piece(L, qlin::unite(out.piece(L), r));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Script execution and reporting.

struct Flags {
  cohom::Coeff coeff = cohom::Coeff::Q;
  bool strict = false;
  bool validate = false;
  bool parallel = false;
  bool with_timing = true;
  std::uint64_t seed = 0;
};

struct Report {
  std::string command;
  std::string input;
  bool ok = true;
  Json result = Json::object();
  std::vector<std::string> diagnostics;
  double ms = 0;
};

namespace detail {

inline Json rat_json(const Rat& r) { return rat_to_string(r); }

inline Json betti_json(const cohom::BettiReport& b) {
  Json j;
  j["coeff"] = cohom::coeff_name(b.coeff);
  j["ranks"] = b.ranks;
  Json torsion = Json::array();
  for (auto& t : b.torsion) {
    Json row = Json::array();
    for (auto& f : t) row.push_back(f.str());
    torsion.push_back(row);
  }
  j["torsion"] = torsion;
  j["euler"] = b.euler;
  return j;
}

inline Json set_json(const SemilinearSet& s) {
  Json j;
  j["ambient"] = s.ambient();
  Json pieces = Json::array();
  for (auto& [L, region] : s.pieces()) {
    Json p;
    Json support = Json::array();
    for (int i : stratal::mask_coords(L)) support.push_back(i + 1);
    p["support"] = support;
    Json disjuncts = Json::array();
    for (auto& d : region.disjuncts) {
      Json atoms = Json::array();
      for (auto& a : d.atoms) atoms.push_back(a.str());
      disjuncts.push_back(atoms);
    }
    p["disjuncts"] = disjuncts;
    pieces.push_back(p);
  }
  j["pieces"] = pieces;
  return j;
}

inline Json interval_json(const family::ParamInterval& iv) {
  Json j;
  j["kind"] = iv.kind;
  j["lo"] = iv.lo ? Json(rat_to_string(*iv.lo)) : Json(nullptr);
  j["hi"] = iv.hi ? Json(rat_to_string(*iv.hi)) : Json(nullptr);
  return j;
}

struct Environment {
  std::map<std::string, SemilinearSet> sets;
  std::map<std::string, std::vector<std::string>> tuple_names;
  std::map<std::string, std::string> family_param;
};

inline SemilinearSet eval_set_expr(const SetExpr& e, const Environment& env) {
  switch (e.kind) {
    case SetExpr::Kind::Brace:
      return eval_brace(e);
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Intersect:
    case SetExpr::Kind::Minus: {
      SemilinearSet a = eval_set_expr(*e.a, env);
      SemilinearSet b = eval_set_expr(*e.b, env);
      if (a.ambient() != b.ambient())
        throw ParseError(e.span, "ambient dimensions disagree in the set expression");
      if (e.kind == SetExpr::Kind::Union) return stratal::unite(a, b);
      if (e.kind == SetExpr::Kind::Intersect) return stratal::intersect(a, b);
      return stratal::subtract(a, b);
    }
    case SetExpr::Kind::Closure:
      return stratal::closure(eval_set_expr(*e.a, env));
    case SetExpr::Kind::Interior:
      return stratal::interior(eval_set_expr(*e.a, env));
    case SetExpr::Kind::Ref: {
      auto it = env.sets.find(e.name);
      if (it == env.sets.end())
        throw ParseError(e.span, "unknown set '" + e.name + "'");
      return it->second;
    }
  }
  throw ParseError(e.span, "malformed set expression");
}

// parameter coordinate resolution: a declared tuple name, or positional xK
inline int resolve_param(const Environment& env, const std::string& set_name,
                         const std::string& param, int ambient, const Span& span) {
  auto it = env.tuple_names.find(set_name);
  if (it != env.tuple_names.end())
    for (size_t i = 0; i < it->second.size(); ++i)
      if (it->second[i] == param) return static_cast<int>(i);
  if (param.size() > 1 && param[0] == 'x') {
    int idx = std::atoi(param.c_str() + 1) - 1;
    if (idx >= 0 && idx < ambient) return idx;
  }
  throw ParseError(span, "cannot resolve parameter '" + param + "' of '" + set_name + "'");
}

inline celldec::Cell build_cell(const std::vector<CellComp>& comps, const Span& span) {
  celldec::CellBuilder b(static_cast<int>(comps.size()));
  int level = 0;
  auto to_form = [&](const LinTerm& t) {
    qlin::LinForm f(t.constant);
    for (auto& [name, c] : t.coeffs) {
      if (name.size() < 2 || name[0] != 'x')
        throw ParseError(span, "cell bounds use positional coordinates x1, x2, ...");
      int idx = std::atoi(name.c_str() + 1) - 1;
      if (idx < 0 || idx >= level)
        throw ParseError(span, "cell bound refers to a coordinate at or above its level");
      f.set_coeff(idx, c);
    }
    return f;
  };
  for (const CellComp& cc : comps) {
    switch (cc.kind) {
      case CellComp::Kind::Point: b.graph(to_form(cc.value)); break;
      case CellComp::Kind::Inf: b.graph_inf(); break;
      case CellComp::Kind::Band: {
        std::optional<qlin::LinForm> lo, hi;
        if (cc.lo) lo = to_form(*cc.lo);
        if (cc.hi) hi = to_form(*cc.hi);
        b.band(lo, hi);
        break;
      }
    }
    ++level;
  }
  return b.cell;
}

inline const SemilinearSet& lookup(const Environment& env, const std::string& name,
                                   const Span& span) {
  auto it = env.sets.find(name);
  if (it == env.sets.end()) throw ParseError(span, "unknown set '" + name + "'");
  return it->second;
}

inline Report run_command(const Command& c, const Environment& env, const Flags& flags) {
  Report rep;
  rep.command = c.print();
  rep.input = c.names.empty() ? "" : c.names[0];
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (c.kind) {
      case Command::Kind::Check: {
        const SemilinearSet& s = lookup(env, c.names[0], c.span);
        bool holds = false;
        if (c.predicate == "open") holds = stratal::is_open(s);
        else if (c.predicate == "closed") holds = stratal::is_closed(s);
        else if (c.predicate == "locally_closed") holds = stratal::is_locally_closed(s);
        else if (c.predicate == "bounded") holds = stratal::is_bounded(s);
        else holds = stratal::is_definably_compact(s);
        rep.result["predicate"] = c.predicate;
        rep.result["holds"] = holds;
        break;
      }
      case Command::Kind::Components: {
        auto comps = celldec::connected_components(lookup(env, c.names[0], c.span));
        rep.result["count"] = comps.size();
        Json arr = Json::array();
        for (auto& comp : comps) arr.push_back(set_json(comp));
        rep.result["components"] = arr;
        break;
      }
      case Command::Kind::Betti:
        rep.result = betti_json(cohom::betti(lookup(env, c.names[0], c.span), flags.coeff));
        break;
      case Command::Kind::BettiC:
        rep.result =
            betti_json(cohom::betti_c(lookup(env, c.names[0], c.span), flags.coeff));
        break;
      case Command::Kind::Closure:
        rep.result = set_json(stratal::closure(lookup(env, c.names[0], c.span)));
        break;
      case Command::Kind::Mv: {
        cohom::MvReport mv =
            cohom::mv_check(lookup(env, c.names[0], c.span), lookup(env, c.names[1], c.span),
                            lookup(env, c.names[2], c.span), flags.coeff);
        rep.result["exact"] = mv.exact;
        rep.result["h_x"] = mv.h_x;
        rep.result["h_u"] = mv.h_u;
        rep.result["h_v"] = mv.h_v;
        rep.result["h_w"] = mv.h_w;
        rep.result["alpha_rank"] = mv.alpha_rank;
        rep.result["beta_rank"] = mv.beta_rank;
        if (!mv.exact) {
          rep.ok = false;
          rep.diagnostics.push_back("exactness rank conditions failed");
        }
        break;
      }
      case Command::Kind::Homotopy: {
        bool equal = cohom::homotopy_check(lookup(env, c.names[0], c.span), c.a, c.b,
                                           flags.coeff);
        rep.result["equal"] = equal;
        if (!equal) {
          rep.ok = false;
          rep.diagnostics.push_back("cohomology changed across the product");
        }
        break;
      }
      case Command::Kind::Scan: {
        const SemilinearSet& z = lookup(env, c.names[0], c.span);
        int param = resolve_param(env, c.names[0], c.param, z.ambient(), c.span);
        SemilinearSet arranged = z;
        if (param != z.ambient() - 1) {
          std::vector<int> perm;
          for (int j = 0; j < z.ambient(); ++j)
            if (j != param) perm.push_back(j);
          perm.push_back(param);
          arranged = stratal::permute(z, perm);
        }
        family::FamilyPartition fp = family::family_scan(arranged, flags.coeff);
        Json arr = Json::array();
        for (auto& p : fp.pieces) {
          Json pj;
          pj["interval"] = interval_json(p.interval);
          pj["pi0"] = p.pi0;
          pj["betti"] = p.betti ? betti_json(*p.betti) : Json(nullptr);
          pj["betti_c"] = p.betti_c ? betti_json(*p.betti_c) : Json(nullptr);
          pj["sample"] = p.sample.str();
          pj["diagnostics"] = p.diagnostics;
          arr.push_back(pj);
        }
        rep.result["pieces"] = arr;
        break;
      }
      case Command::Kind::Table: {
        celldec::Cell cell = build_cell(c.cell, c.span);
        rep.result = betti_json(cohom::complement_table(cell, c.t, c.s, flags.coeff));
        break;
      }
    }
  } catch (const std::exception& ex) {
    rep.ok = false;
    rep.diagnostics.push_back(ex.what());
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace detail

// Execute a parsed script.  Declarations are materialized first (errors
// there are load errors); command failures are captured per report.
inline std::vector<Report> run(const Script& script, const Flags& flags = {}) {
  detail::Environment env;
  for (const Decl& d : script.decls) {
    if (env.sets.count(d.name))
      throw ParseError(d.span, "duplicate declaration of '" + d.name + "'");
    SemilinearSet s = detail::eval_set_expr(*d.expr, env);
    if (s.ambient() != d.ambient)
      throw ParseError(d.span, "declared ambient G^" + std::to_string(d.ambient) +
                                   " but the expression lives in G^" +
                                   std::to_string(s.ambient()));
    env.sets.emplace(d.name, std::move(s));
    if (d.expr->kind == SetExpr::Kind::Brace) {
      env.tuple_names[d.name] = d.expr->tuple;
    }
    if (d.is_family) {
      env.family_param[d.name] = d.param;
      if (d.expr->kind == SetExpr::Kind::Brace) {
        bool found = false;
        for (auto& t : d.expr->tuple) found = found || t == d.param;
        if (!found)
          throw ParseError(d.span, "family parameter '" + d.param +
                                       "' is not a tuple coordinate");
      }
    }
  }

  std::vector<Report> reports;
  if (flags.validate) {
    for (auto& [name, s] : env.sets) {
      Report rep;
      rep.command = "validate " + name;
      rep.input = name;
      auto t0 = std::chrono::steady_clock::now();
      SemilinearSet cl = stratal::closure(s);
      bool idem = stratal::equal(stratal::closure(cl), cl);
      bool dual = stratal::equal(stratal::interior(s),
                                 stratal::complement(stratal::closure(stratal::complement(s))));
      bool extensive = stratal::subset(s, cl);
      rep.result["closure_idempotent"] = idem;
      rep.result["interior_duality"] = dual;
      rep.result["closure_extensive"] = extensive;
      rep.ok = idem && dual && extensive;
      auto t1 = std::chrono::steady_clock::now();
      rep.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      reports.push_back(std::move(rep));
    }
  }

  for (const Command& c : script.commands) {
    reports.push_back(detail::run_command(c, env, flags));
    if (flags.strict && !reports.back().ok) break;
  }
  return reports;
}

inline Json reports_json(const std::vector<Report>& reports, const Flags& flags) {
  Json top;
  top["version"] = 1;
  Json arr = Json::array();
  for (const Report& r : reports) {
    Json j;
    j["command"] = r.command;
    j["input"] = r.input;
    j["ok"] = r.ok;
    j["result"] = r.result;
    j["diagnostics"] = r.diagnostics;
    if (flags.with_timing) j["ms"] = r.ms;
    arr.push_back(j);
  }
  top["reports"] = arr;
  return top;
}

}  // namespace semitop::dsl
