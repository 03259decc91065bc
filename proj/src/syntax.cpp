#include "fat/syntax.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace fat {

TypePtr tvar(std::string name) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Var;
  t->name = std::move(name);
  return t;
}

TypePtr tarrow(TypePtr dom, TypePtr cod) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Arrow;
  t->a = std::move(dom);
  t->b = std::move(cod);
  return t;
}

TypePtr tforall(std::string var, TypePtr body) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Forall;
  t->name = std::move(var);
  t->a = std::move(body);
  return t;
}

TypePtr tclub() {
  static TypePtr c = [] {
    auto t = std::make_shared<Type>();
    t->k = Type::K::Club;
    return t;
  }();
  return c;
}

TermPtr mkvar(std::string name) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::Var;
  t->name = std::move(name);
  return t;
}

TermPtr mkabs(std::string var, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::Abs;
  t->name = std::move(var);
  t->body = std::move(body);
  return t;
}

TermPtr mkapp(TermPtr fun, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::App;
  t->fun = std::move(fun);
  t->arg = std::move(arg);
  return t;
}

TermPtr mktyabs(std::string tyvar, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::TyAbs;
  t->name = std::move(tyvar);
  t->body = std::move(body);
  return t;
}

TermPtr mktyapp(TermPtr fun, TypePtr witness) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::TyApp;
  t->fun = std::move(fun);
  t->witness = std::move(witness);
  return t;
}

TermPtr mkstar() {
  auto t = std::make_shared<Term>();
  t->k = Term::K::Star;
  return t;
}

SimplePtr sbase() {
  static SimplePtr b = [] {
    auto t = std::make_shared<SimpleType>();
    t->arrow = false;
    return t;
  }();
  return b;
}

SimplePtr sarrow(SimplePtr dom, SimplePtr cod) {
  auto t = std::make_shared<SimpleType>();
  t->arrow = true;
  t->dom = std::move(dom);
  t->cod = std::move(cod);
  return t;
}

bool simple_eq(const SimplePtr& a, const SimplePtr& b) {
  if (a->arrow != b->arrow) return false;
  if (!a->arrow) return true;
  return simple_eq(a->dom, b->dom) && simple_eq(a->cod, b->cod);
}

std::string print_simple(const SimplePtr& t) {
  if (!t->arrow) return "o";
  std::string dom = print_simple(t->dom);
  if (t->dom->arrow) dom = "(" + dom + ")";
  return dom + " -> " + print_simple(t->cod);
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

parse_error::parse_error(const std::string& msg, size_t pos)
    : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), pos(pos) {}

namespace {

struct Token {
  enum class K { Ident, Arrow, DArrow, Lam, TyLam, Dot, LParen, RParen, LBrack, RBrack, Club, Star, End };
  K k;
  std::string text;
  size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Token::K k, std::string text, size_t pos) {
    out.push_back(Token{k, std::move(text), pos});
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
      push(Token::K::Ident, s.substr(start, i - start), start);
      continue;
    }
    switch (c) {
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          push(Token::K::Arrow, "->", i);
          i += 2;
          continue;
        }
        throw parse_error("unexpected '-'", i);
      case '=':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          push(Token::K::DArrow, "=>", i);
          i += 2;
          continue;
        }
        throw parse_error("unexpected '='", i);
      case '\\':
        push(Token::K::Lam, "\\", i);
        ++i;
        continue;
      case '/':
        if (i + 1 < s.size() && s[i + 1] == '\\') {
          push(Token::K::TyLam, "/\\", i);
          i += 2;
          continue;
        }
        throw parse_error("unexpected '/'", i);
      case '.':
        push(Token::K::Dot, ".", i);
        ++i;
        continue;
      case '(':
        push(Token::K::LParen, "(", i);
        ++i;
        continue;
      case ')':
        push(Token::K::RParen, ")", i);
        ++i;
        continue;
      case '[':
        push(Token::K::LBrack, "[", i);
        ++i;
        continue;
      case ']':
        push(Token::K::RBrack, "]", i);
        ++i;
        continue;
      case '#':
        push(Token::K::Club, "#", i);
        ++i;
        continue;
      case '*':
        push(Token::K::Star, "*", i);
        ++i;
        continue;
      case ',':
        push(Token::K::Ident, ",", i);  // only used by the formula grammar
        ++i;
        continue;
      default:
        throw parse_error(std::string("unexpected character '") + c + "'", i);
    }
  }
  push(Token::K::End, "", s.size());
  return out;
}

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;

  const Token& peek() const { return toks[at]; }
  Token next() { return toks[at++]; }
  bool accept(Token::K k) {
    if (toks[at].k == k) {
      ++at;
      return true;
    }
    return false;
  }
  Token expect(Token::K k, const std::string& what) {
    if (toks[at].k != k) throw parse_error("expected " + what, toks[at].pos);
    return toks[at++];
  }

  bool is_keyword(const std::string& kw) const {
    return toks[at].k == Token::K::Ident && toks[at].text == kw;
  }

  // Type grammar.
  TypePtr type() {
    TypePtr lhs = type_atom_or_forall();
    if (accept(Token::K::Arrow)) return tarrow(lhs, type());
    return lhs;
  }

  TypePtr type_atom_or_forall() {
    if (is_keyword("forall")) {
      next();
      std::vector<std::string> vars;
      while (peek().k == Token::K::Ident && peek().text != "forall") vars.push_back(next().text);
      if (vars.empty()) throw parse_error("expected type variables after 'forall'", peek().pos);
      expect(Token::K::Dot, "'.'");
      TypePtr body = type();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = tforall(*it, body);
      return body;
    }
    return type_atom();
  }

  TypePtr type_atom() {
    const Token& t = peek();
    switch (t.k) {
      case Token::K::Ident:
        if (t.text == "forall") return type_atom_or_forall();
        next();
        return tvar(t.text);
      case Token::K::Club:
        next();
        return tclub();
      case Token::K::LParen: {
        next();
        TypePtr inner = type();
        expect(Token::K::RParen, "')'");
        return inner;
      }
      default:
        throw parse_error("expected a type", t.pos);
    }
  }

  // Term grammar.
  TermPtr term(TermStyle style) {
    if (peek().k == Token::K::Lam) {
      next();
      std::vector<std::string> vars;
      while (peek().k == Token::K::Ident) vars.push_back(next().text);
      if (vars.empty()) throw parse_error("expected variables after '\\'", peek().pos);
      expect(Token::K::Dot, "'.'");
      TermPtr body = term(style);
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = mkabs(*it, body);
      return body;
    }
    if (peek().k == Token::K::TyLam) {
      if (style != TermStyle::Church) throw parse_error("type abstraction is not Curry-style syntax", peek().pos);
      next();
      std::string v = expect(Token::K::Ident, "a type variable").text;
      expect(Token::K::Dot, "'.'");
      return mktyabs(v, term(style));
    }
    TermPtr head = term_atom(style);
    for (;;) {
      const Token& t = peek();
      if (t.k == Token::K::Ident || t.k == Token::K::LParen || t.k == Token::K::Star) {
        head = mkapp(head, term_atom(style));
        continue;
      }
      if (t.k == Token::K::Lam || t.k == Token::K::TyLam) {
        head = mkapp(head, term(style));
        continue;
      }
      if (t.k == Token::K::LBrack) {
        if (style != TermStyle::Church) throw parse_error("type application is not Curry-style syntax", t.pos);
        next();
        TypePtr w = type();
        expect(Token::K::RBrack, "']'");
        head = mktyapp(head, w);
        continue;
      }
      break;
    }
    return head;
  }

  TermPtr term_atom(TermStyle style) {
    const Token& t = peek();
    switch (t.k) {
      case Token::K::Ident:
        next();
        return mkvar(t.text);
      case Token::K::Star:
        next();
        return mkstar();
      case Token::K::LParen: {
        next();
        TermPtr inner = term(style);
        expect(Token::K::RParen, "')'");
        return inner;
      }
      default:
        throw parse_error("expected a term", t.pos);
    }
  }
};

}  // namespace

TypePtr parse_type(const std::string& text) {
  Parser p{lex(text)};
  TypePtr t = p.type();
  if (p.peek().k != Token::K::End) throw parse_error("trailing input after type", p.peek().pos);
  return t;
}

TermPtr parse_term(const std::string& text, TermStyle style) {
  Parser p{lex(text)};
  TermPtr t = p.term(style);
  if (p.peek().k != Token::K::End) throw parse_error("trailing input after term", p.peek().pos);
  return t;
}

// ---------------------------------------------------------------------------
// Printing (minimal parentheses, round-trips through the parser)
// ---------------------------------------------------------------------------

namespace {

void print_type_rec(const TypePtr& t, bool at_left_of_arrow, std::ostream& os) {
  switch (t->k) {
    case Type::K::Var:
      os << t->name;
      return;
    case Type::K::Club:
      os << '#';
      return;
    case Type::K::Arrow:
      if (at_left_of_arrow) os << '(';
      print_type_rec(t->a, true, os);
      os << " -> ";
      print_type_rec(t->b, false, os);
      if (at_left_of_arrow) os << ')';
      return;
    case Type::K::Forall: {
      if (at_left_of_arrow) os << '(';
      os << "forall " << t->name;
      TypePtr body = t->a;
      while (body->k == Type::K::Forall) {
        os << ' ' << body->name;
        body = body->a;
      }
      os << ". ";
      print_type_rec(body, false, os);
      if (at_left_of_arrow) os << ')';
      return;
    }
  }
}

// pos: 0 = top/body, 1 = function position, 2 = argument position
void print_term_rec(const TermPtr& t, int pos, std::ostream& os) {
  switch (t->k) {
    case Term::K::Var:
      os << t->name;
      return;
    case Term::K::Star:
      os << '*';
      return;
    case Term::K::Abs: {
      bool paren = pos != 0;
      if (paren) os << '(';
      os << '\\' << t->name;
      TermPtr body = t->body;
      while (body->k == Term::K::Abs) {
        os << ' ' << body->name;
        body = body->body;
      }
      os << ". ";
      print_term_rec(body, 0, os);
      if (paren) os << ')';
      return;
    }
    case Term::K::TyAbs: {
      bool paren = pos != 0;
      if (paren) os << '(';
      os << "/\\" << t->name << ". ";
      print_term_rec(t->body, 0, os);
      if (paren) os << ')';
      return;
    }
    case Term::K::App: {
      bool paren = pos == 2;
      if (paren) os << '(';
      print_term_rec(t->fun, 1, os);
      os << ' ';
      print_term_rec(t->arg, 2, os);
      if (paren) os << ')';
      return;
    }
    case Term::K::TyApp: {
      bool paren = pos == 2;
      if (paren) os << '(';
      print_term_rec(t->fun, 1, os);
      os << " [" << print_type(t->witness) << ']';
      if (paren) os << ')';
      return;
    }
  }
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::ostringstream os;
  print_type_rec(t, false, os);
  return os.str();
}

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  print_term_rec(t, 0, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

namespace {

void ftv_rec(const TypePtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->k) {
    case Type::K::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case Type::K::Club:
      return;
    case Type::K::Arrow:
      ftv_rec(t->a, bound, out);
      ftv_rec(t->b, bound, out);
      return;
    case Type::K::Forall: {
      bool fresh = bound.insert(t->name).second;
      ftv_rec(t->a, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_type_vars(const TypePtr& t) {
  std::set<std::string> bound, out;
  ftv_rec(t, bound, out);
  return out;
}

std::set<std::string> free_term_vars(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
      return {t->name};
    case Term::K::Star:
      return {};
    case Term::K::Abs: {
      auto s = free_term_vars(t->body);
      s.erase(t->name);
      return s;
    }
    case Term::K::TyAbs:
      return free_term_vars(t->body);
    case Term::K::App: {
      auto s = free_term_vars(t->fun);
      auto s2 = free_term_vars(t->arg);
      s.insert(s2.begin(), s2.end());
      return s;
    }
    case Term::K::TyApp:
      return free_term_vars(t->fun);
  }
  return {};
}

std::set<std::string> all_type_names(const TypePtr& t) {
  std::set<std::string> out;
  switch (t->k) {
    case Type::K::Var:
      out.insert(t->name);
      break;
    case Type::K::Club:
      break;
    case Type::K::Arrow: {
      out = all_type_names(t->a);
      auto r = all_type_names(t->b);
      out.insert(r.begin(), r.end());
      break;
    }
    case Type::K::Forall: {
      out = all_type_names(t->a);
      out.insert(t->name);
      break;
    }
  }
  return out;
}

std::set<std::string> all_names(const TermPtr& t) {
  std::set<std::string> out;
  switch (t->k) {
    case Term::K::Var:
      out.insert(t->name);
      break;
    case Term::K::Star:
      break;
    case Term::K::Abs:
    case Term::K::TyAbs: {
      out = all_names(t->body);
      out.insert(t->name);
      break;
    }
    case Term::K::App: {
      out = all_names(t->fun);
      auto r = all_names(t->arg);
      out.insert(r.begin(), r.end());
      break;
    }
    case Term::K::TyApp: {
      out = all_names(t->fun);
      auto r = all_type_names(t->witness);
      out.insert(r.begin(), r.end());
      break;
    }
  }
  return out;
}

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

bool var_match(const Env& env, const std::string& a, const std::string& b) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == a || it->second == b) return it->first == a && it->second == b;
  }
  return a == b;
}

bool aeq_type(const TypePtr& a, const TypePtr& b, Env& env) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case Type::K::Var:
      return var_match(env, a->name, b->name);
    case Type::K::Club:
      return true;
    case Type::K::Arrow:
      return aeq_type(a->a, b->a, env) && aeq_type(a->b, b->b, env);
    case Type::K::Forall: {
      env.emplace_back(a->name, b->name);
      bool r = aeq_type(a->a, b->a, env);
      env.pop_back();
      return r;
    }
  }
  return false;
}

bool aeq_term(const TermPtr& a, const TermPtr& b, Env& tenv, Env& yenv) {
  if (a->k != b->k) return false;
  switch (a->k) {
    case Term::K::Var:
      return var_match(tenv, a->name, b->name);
    case Term::K::Star:
      return true;
    case Term::K::Abs: {
      tenv.emplace_back(a->name, b->name);
      bool r = aeq_term(a->body, b->body, tenv, yenv);
      tenv.pop_back();
      return r;
    }
    case Term::K::TyAbs: {
      yenv.emplace_back(a->name, b->name);
      bool r = aeq_term(a->body, b->body, tenv, yenv);
      yenv.pop_back();
      return r;
    }
    case Term::K::App:
      return aeq_term(a->fun, b->fun, tenv, yenv) && aeq_term(a->arg, b->arg, tenv, yenv);
    case Term::K::TyApp:
      return aeq_term(a->fun, b->fun, tenv, yenv) && aeq_type(a->witness, b->witness, yenv);
  }
  return false;
}

}  // namespace

bool alpha_eq(const TypePtr& a, const TypePtr& b) {
  Env env;
  return aeq_type(a, b, env);
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  Env tenv, yenv;
  return aeq_term(a, b, tenv, yenv);
}

bool is_curry(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return true;
    case Term::K::Abs:
      return is_curry(t->body);
    case Term::K::App:
      return is_curry(t->fun) && is_curry(t->arg);
    case Term::K::TyAbs:
    case Term::K::TyApp:
      return false;
  }
  return false;
}

TypePtr substitute(const TypePtr& a, const std::string& x, const TypePtr& c) {
  switch (a->k) {
    case Type::K::Var:
      return a->name == x ? c : a;
    case Type::K::Club:
      return a;
    case Type::K::Arrow:
      return tarrow(substitute(a->a, x, c), substitute(a->b, x, c));
    case Type::K::Forall: {
      if (a->name == x) return a;
      auto fvc = free_type_vars(c);
      if (fvc.count(a->name) && free_type_vars(a->a).count(x)) {
        NameSupply supply;
        for (const auto& n : fvc) supply.note(n);
        supply.note_type(a->a);
        supply.note(x);
        std::string v = supply.fresh(a->name);
        return tforall(v, substitute(substitute(a->a, a->name, tvar(v)), x, c));
      }
      return tforall(a->name, substitute(a->a, x, c));
    }
  }
  return a;
}

TermPtr subst_term(const TermPtr& t, const std::string& x, const TermPtr& u) {
  switch (t->k) {
    case Term::K::Var:
      return t->name == x ? u : t;
    case Term::K::Star:
      return t;
    case Term::K::Abs: {
      if (t->name == x) return t;
      auto fvu = free_term_vars(u);
      if (fvu.count(t->name) && free_term_vars(t->body).count(x)) {
        NameSupply supply;
        for (const auto& n : fvu) supply.note(n);
        supply.note_term(t->body);
        supply.note(x);
        std::string v = supply.fresh(t->name);
        return mkabs(v, subst_term(subst_term(t->body, t->name, mkvar(v)), x, u));
      }
      return mkabs(t->name, subst_term(t->body, x, u));
    }
    case Term::K::TyAbs:
      return mktyabs(t->name, subst_term(t->body, x, u));
    case Term::K::App:
      return mkapp(subst_term(t->fun, x, u), subst_term(t->arg, x, u));
    case Term::K::TyApp:
      return mktyapp(subst_term(t->fun, x, u), t->witness);
  }
  return t;
}

std::set<std::string> free_type_vars_in_term(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return {};
    case Term::K::Abs:
      return free_type_vars_in_term(t->body);
    case Term::K::TyAbs: {
      auto s = free_type_vars_in_term(t->body);
      s.erase(t->name);
      return s;
    }
    case Term::K::App: {
      auto s = free_type_vars_in_term(t->fun);
      auto r = free_type_vars_in_term(t->arg);
      s.insert(r.begin(), r.end());
      return s;
    }
    case Term::K::TyApp: {
      auto s = free_type_vars_in_term(t->fun);
      auto r = free_type_vars(t->witness);
      s.insert(r.begin(), r.end());
      return s;
    }
  }
  return {};
}

TermPtr subst_type_in_term(const TermPtr& t, const std::string& x, const TypePtr& c) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return t;
    case Term::K::Abs:
      return mkabs(t->name, subst_type_in_term(t->body, x, c));
    case Term::K::TyAbs: {
      if (t->name == x) return t;
      auto fvc = free_type_vars(c);
      if (fvc.count(t->name) && free_type_vars_in_term(t->body).count(x)) {
        NameSupply supply;
        for (const auto& n : fvc) supply.note(n);
        supply.note_term(t->body);
        supply.note(x);
        std::string v = supply.fresh(t->name);
        return mktyabs(v, subst_type_in_term(subst_type_in_term(t->body, t->name, tvar(v)), x, c));
      }
      return mktyabs(t->name, subst_type_in_term(t->body, x, c));
    }
    case Term::K::App:
      return mkapp(subst_type_in_term(t->fun, x, c), subst_type_in_term(t->arg, x, c));
    case Term::K::TyApp:
      return mktyapp(subst_type_in_term(t->fun, x, c), substitute(t->witness, x, c));
  }
  return t;
}

SimplePtr erase_types(const TypePtr& a) {
  switch (a->k) {
    case Type::K::Var:
    case Type::K::Club:
      return sbase();
    case Type::K::Arrow:
      return sarrow(erase_types(a->a), erase_types(a->b));
    case Type::K::Forall:
      return erase_types(a->a);
  }
  return sbase();
}

TermPtr erase_term(const TermPtr& t) {
  switch (t->k) {
    case Term::K::Var:
    case Term::K::Star:
      return t;
    case Term::K::Abs:
      return mkabs(t->name, erase_term(t->body));
    case Term::K::TyAbs:
      return erase_term(t->body);
    case Term::K::App:
      return mkapp(erase_term(t->fun), erase_term(t->arg));
    case Term::K::TyApp:
      return erase_term(t->fun);
  }
  return t;
}

void NameSupply::note_type(const TypePtr& t) {
  for (const auto& n : all_type_names(t)) used_.insert(n);
}

void NameSupply::note_term(const TermPtr& t) {
  for (const auto& n : all_names(t)) used_.insert(n);
}

std::string NameSupply::fresh(const std::string& base) {
  std::string stem = base.empty() ? std::string("v") : base;
  if (!used_.count(stem)) {
    used_.insert(stem);
    return stem;
  }
  for (int i = 1;; ++i) {
    std::string cand = stem + "'" + (i > 1 ? std::to_string(i) : "");
    if (!used_.count(cand)) {
      used_.insert(cand);
      return cand;
    }
  }
}

namespace {

TypePtr rename_type(const TypePtr& a, std::map<std::string, std::string>& env, NameSupply& supply) {
  switch (a->k) {
    case Type::K::Var: {
      auto it = env.find(a->name);
      return it == env.end() ? a : tvar(it->second);
    }
    case Type::K::Club:
      return a;
    case Type::K::Arrow:
      return tarrow(rename_type(a->a, env, supply), rename_type(a->b, env, supply));
    case Type::K::Forall: {
      std::string v = supply.fresh(a->name);
      auto it = env.find(a->name);
      std::optional<std::string> saved;
      if (it != env.end()) saved = it->second;
      env[a->name] = v;
      TypePtr body = rename_type(a->a, env, supply);
      if (saved)
        env[a->name] = *saved;
      else
        env.erase(a->name);
      return tforall(v, body);
    }
  }
  return a;
}

TermPtr rename_term(const TermPtr& t, std::map<std::string, std::string>& tenv,
                    std::map<std::string, std::string>& yenv, NameSupply& supply) {
  switch (t->k) {
    case Term::K::Var: {
      auto it = tenv.find(t->name);
      return it == tenv.end() ? t : mkvar(it->second);
    }
    case Term::K::Star:
      return t;
    case Term::K::Abs: {
      std::string v = supply.fresh(t->name);
      auto it = tenv.find(t->name);
      std::optional<std::string> saved;
      if (it != tenv.end()) saved = it->second;
      tenv[t->name] = v;
      TermPtr body = rename_term(t->body, tenv, yenv, supply);
      if (saved)
        tenv[t->name] = *saved;
      else
        tenv.erase(t->name);
      return mkabs(v, body);
    }
    case Term::K::TyAbs: {
      std::string v = supply.fresh(t->name);
      auto it = yenv.find(t->name);
      std::optional<std::string> saved;
      if (it != yenv.end()) saved = it->second;
      yenv[t->name] = v;
      TermPtr body = rename_term(t->body, tenv, yenv, supply);
      if (saved)
        yenv[t->name] = *saved;
      else
        yenv.erase(t->name);
      return mktyabs(v, body);
    }
    case Term::K::App:
      return mkapp(rename_term(t->fun, tenv, yenv, supply), rename_term(t->arg, tenv, yenv, supply));
    case Term::K::TyApp: {
      TermPtr fun = rename_term(t->fun, tenv, yenv, supply);
      TypePtr w = t->witness;
      for (const auto& [from, to] : yenv) w = substitute(w, from, tvar(to));
      std::map<std::string, std::string> empty;
      w = rename_type(w, empty, supply);
      return mktyapp(fun, w);
    }
  }
  return t;
}

}  // namespace

TypePtr barendregt_rename(const TypePtr& a, NameSupply& supply) {
  std::map<std::string, std::string> env;
  return rename_type(a, env, supply);
}

TermPtr barendregt_rename(const TermPtr& t, NameSupply& supply) {
  std::map<std::string, std::string> tenv, yenv;
  return rename_term(t, tenv, yenv, supply);
}

TypePtr barendregt_rename(const TypePtr& a) {
  NameSupply supply;
  supply.note_type(a);
  return barendregt_rename(a, supply);
}

TermPtr barendregt_rename(const TermPtr& t) {
  NameSupply supply;
  supply.note_term(t);
  return barendregt_rename(t, supply);
}

}  // namespace fat
