#include "parser.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace rhobound {
namespace {

enum class Tok {
  LParen,
  RParen,
  Ident,
  Int,
  Arrow,
  GuardSep,
  AndAnd,
  Lt,
  Le,
  EqTok,
  Ge,
  Gt,
  Ne,
  Plus,
  Minus,
  Star,
  Caret,
  Comma,
  At,
  End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(const std::string &text, const std::string &file) : text_(text), file_(file) {}

  std::vector<Token> run(std::vector<ParseDiagnostic> &diags) {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      SourceSpan here{file_, line_, col_};
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '\'')) {
          id += text_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, id, here});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string n;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          n += text_[pos_];
          advance();
        }
        out.push_back({Tok::Int, n, here});
        continue;
      }
      auto two = text_.substr(pos_, 2);
      auto three = text_.substr(pos_, 3);
      if (three == ":|:") {
        out.push_back({Tok::GuardSep, three, here});
        advance(), advance(), advance();
      } else if (two == "->") {
        out.push_back({Tok::Arrow, two, here});
        advance(), advance();
      } else if (two == "&&") {
        out.push_back({Tok::AndAnd, two, here});
        advance(), advance();
      } else if (two == "<=") {
        out.push_back({Tok::Le, two, here});
        advance(), advance();
      } else if (two == ">=") {
        out.push_back({Tok::Ge, two, here});
        advance(), advance();
      } else if (two == "!=") {
        out.push_back({Tok::Ne, two, here});
        advance(), advance();
      } else if (two == "==") {
        out.push_back({Tok::EqTok, two, here});
        advance(), advance();
      } else {
        switch (c) {
          case '(': out.push_back({Tok::LParen, "(", here}); break;
          case ')': out.push_back({Tok::RParen, ")", here}); break;
          case '<': out.push_back({Tok::Lt, "<", here}); break;
          case '>': out.push_back({Tok::Gt, ">", here}); break;
          case '=': out.push_back({Tok::EqTok, "=", here}); break;
          case '+': out.push_back({Tok::Plus, "+", here}); break;
          case '-': out.push_back({Tok::Minus, "-", here}); break;
          case '*': out.push_back({Tok::Star, "*", here}); break;
          case '^': out.push_back({Tok::Caret, "^", here}); break;
          case ',': out.push_back({Tok::Comma, ",", here}); break;
          case '@': out.push_back({Tok::At, "@", here}); break;
          default:
            diags.push_back({here, std::string("unexpected character '") + c + "'"});
        }
        advance();
      }
    }
    out.push_back({Tok::End, "", {file_, line_, col_}});
    return out;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string &text_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// Expression over declared variables and call terms. Calls are collected
// into the program (deduplicated by target and zeta) and appear in the
// polynomial as call indeterminates.
struct CallSite {
  int target;
  std::vector<Polynomial> zeta;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<ParseDiagnostic> &diags)
      : toks_(std::move(toks)), diags_(diags) {}

  std::optional<Program> run() {
    // (GOAL COMPLEXITY)
    expect(Tok::LParen);
    expect_ident("GOAL");
    expect(Tok::Ident);
    expect(Tok::RParen);
    // (STARTTERM (FUNCTIONSYMBOLS l0))
    expect(Tok::LParen);
    expect_ident("STARTTERM");
    expect(Tok::LParen);
    expect_ident("FUNCTIONSYMBOLS");
    std::string start = expect(Tok::Ident).text;
    expect(Tok::RParen);
    expect(Tok::RParen);
    // (VAR v1 v2 ...)
    expect(Tok::LParen);
    expect_ident("VAR");
    while (peek().kind == Tok::Ident) prog_.vars.push_back(next().text);
    expect(Tok::RParen);
    if (prog_.vars.empty()) error(peek().span, "no variables declared");

    loc_id(start);
    prog_.initial = 0;

    // (RETURN loc var)*
    while (peek().kind == Tok::LParen && peek2_is("RETURN")) {
      expect(Tok::LParen);
      expect(Tok::Ident);
      Token loc = expect(Tok::Ident);
      Token var = expect(Tok::Ident);
      expect(Tok::RParen);
      int l = loc_id(loc.text);
      int v = prog_.var_id(var.text);
      if (v < 0) error(var.span, "undeclared return variable '" + var.text + "'");
      else if (prog_.returns.count(l))
        error(loc.span, "duplicate RETURN for location '" + loc.text + "'");
      else
        prog_.returns[l] = v;
    }

    // (RULES rule*)
    expect(Tok::LParen);
    expect_ident("RULES");
    while (peek().kind == Tok::Ident) parse_rule();
    expect(Tok::RParen);
    if (peek().kind != Tok::End) error(peek().span, "trailing input after RULES");

    if (!diags_.empty()) return std::nullopt;
    return prog_;
  }

 private:
  const Token &peek() const { return toks_[idx_]; }
  bool peek2_is(const std::string &s) const {
    return idx_ + 1 < toks_.size() && toks_[idx_ + 1].kind == Tok::Ident &&
           toks_[idx_ + 1].text == s;
  }
  const Token &next() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }
  const Token &expect(Tok k) {
    if (peek().kind != k) {
      error(peek().span, "unexpected token '" + peek().text + "'");
      return peek();
    }
    return next();
  }
  void expect_ident(const std::string &s) {
    const Token &t = expect(Tok::Ident);
    if (t.text != s) error(t.span, "expected '" + s + "', found '" + t.text + "'");
  }
  void error(const SourceSpan &s, const std::string &m) {
    diags_.push_back({s, m});
    if (diags_.size() > 40) throw std::runtime_error("too many parse errors");
  }

  int loc_id(const std::string &name) {
    int id = prog_.location_id(name);
    if (id >= 0) return id;
    prog_.locations.push_back(name);
    return static_cast<int>(prog_.locations.size()) - 1;
  }

  int intern_call(const std::string &loc_name, std::vector<Polynomial> zeta,
                  const SourceSpan &span) {
    int target = loc_id(loc_name);
    for (size_t i = 0; i < prog_.calls.size(); ++i)
      if (prog_.calls[i].target == target && prog_.calls[i].zeta == zeta)
        return static_cast<int>(i);
    FunctionCall c;
    c.target = target;
    c.zeta = std::move(zeta);
    c.name = "rho" + std::to_string(prog_.calls.size() + 1);
    prog_.calls.push_back(std::move(c));
    (void)span;
    return static_cast<int>(prog_.calls.size()) - 1;
  }

  // expr := term (('+'|'-') term)*
  // term := factor ('*' factor)*
  // factor := atom ('^' INT)?
  // atom := INT | IDENT | '@' IDENT '(' expr,... ')' | '(' expr ')' | '-' factor
  Polynomial parse_expr(bool allow_calls) {
    Polynomial p = parse_term(allow_calls);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool plus = next().kind == Tok::Plus;
      Polynomial q = parse_term(allow_calls);
      p = plus ? p + q : p - q;
    }
    return p;
  }
  Polynomial parse_term(bool allow_calls) {
    Polynomial p = parse_factor(allow_calls);
    while (peek().kind == Tok::Star) {
      next();
      p = p * parse_factor(allow_calls);
    }
    return p;
  }
  Polynomial parse_factor(bool allow_calls) {
    Polynomial base = parse_atom(allow_calls);
    if (peek().kind == Tok::Caret) {
      next();
      Token e = expect(Tok::Int);
      base = base.pow(static_cast<unsigned>(std::stoul(e.text.empty() ? "0" : e.text)));
    }
    return base;
  }
  Polynomial parse_atom(bool allow_calls) {
    const Token &t = peek();
    switch (t.kind) {
      case Tok::Int: {
        next();
        return Polynomial::constant(BigInt(t.text));
      }
      case Tok::Minus: {
        next();
        return -parse_factor(allow_calls);
      }
      case Tok::LParen: {
        next();
        Polynomial p = parse_expr(allow_calls);
        expect(Tok::RParen);
        return p;
      }
      case Tok::At: {
        SourceSpan span = t.span;
        next();
        Token loc = expect(Tok::Ident);
        expect(Tok::LParen);
        std::vector<Polynomial> args;
        if (peek().kind != Tok::RParen) {
          args.push_back(parse_expr(false));
          while (peek().kind == Tok::Comma) {
            next();
            args.push_back(parse_expr(false));
          }
        }
        expect(Tok::RParen);
        if (!allow_calls) {
          error(span, "function call not allowed here (nested calls are rejected)");
          return Polynomial();
        }
        if (args.size() != prog_.vars.size()) {
          error(span, "call to '" + loc.text + "' has " + std::to_string(args.size()) +
                          " arguments, expected " + std::to_string(prog_.vars.size()));
          return Polynomial();
        }
        if (loc.text == prog_.locations[prog_.initial]) {
          error(span, "call targets the start location '" + loc.text + "'");
          return Polynomial();
        }
        int c = intern_call(loc.text, std::move(args), span);
        return Polynomial::variable(prog_.call_ind(c));
      }
      case Tok::Ident: {
        next();
        int v = prog_.var_id(t.text);
        if (v < 0) {
          error(t.span, "undeclared variable '" + t.text + "'");
          return Polynomial();
        }
        return Polynomial::variable(v);
      }
      default:
        error(t.span, "expected expression, found '" + t.text + "'");
        next();
        return Polynomial();
    }
  }

  struct GuardPart {
    bool is_ne = false;
    std::vector<Atom> atoms;  // when !is_ne
    Atom ne_a, ne_b;          // when is_ne: disjunction of the two
  };

  void parse_rule() {
    Token lhs_loc = expect(Tok::Ident);
    int source = loc_id(lhs_loc.text);
    expect(Tok::LParen);
    for (size_t i = 0; i < prog_.vars.size(); ++i) {
      if (i > 0) expect(Tok::Comma);
      Token v = expect(Tok::Ident);
      if (v.text != prog_.vars[i])
        error(v.span, "left-hand side argument '" + v.text + "' must be variable '" +
                          prog_.vars[i] + "' (declared order)");
    }
    expect(Tok::RParen);
    expect(Tok::Arrow);
    Token rhs_loc = expect(Tok::Ident);
    int target = loc_id(rhs_loc.text);
    expect(Tok::LParen);
    std::vector<Polynomial> update;
    for (size_t i = 0; i < prog_.vars.size(); ++i) {
      if (i > 0) expect(Tok::Comma);
      update.push_back(parse_expr(true));
    }
    expect(Tok::RParen);

    std::vector<GuardPart> parts;
    if (peek().kind == Tok::GuardSep) {
      next();
      parts.push_back(parse_guard_atom());
      while (peek().kind == Tok::AndAnd) {
        next();
        parts.push_back(parse_guard_atom());
      }
    }

    // ≠ is a disjunction: split the rule into one transition per branch.
    std::vector<std::vector<Atom>> variants{{}};
    for (const GuardPart &gp : parts) {
      if (!gp.is_ne) {
        for (auto &v : variants) v.insert(v.end(), gp.atoms.begin(), gp.atoms.end());
      } else {
        std::vector<std::vector<Atom>> expanded;
        for (const auto &v : variants) {
          auto a = v, b = v;
          a.push_back(gp.ne_a);
          b.push_back(gp.ne_b);
          expanded.push_back(std::move(a));
          expanded.push_back(std::move(b));
        }
        variants = std::move(expanded);
      }
    }
    for (auto &atoms : variants) {
      Transition t;
      t.name = "t" + std::to_string(prog_.transitions.size());
      t.source = source;
      t.target = target;
      t.guard.atoms = std::move(atoms);
      t.update = update;
      prog_.transitions.push_back(std::move(t));
    }
  }

  GuardPart parse_guard_atom() {
    Polynomial a = parse_expr(false);
    Tok rel = peek().kind;
    GuardPart gp;
    const Polynomial one = Polynomial::constant(BigInt(1));
    switch (rel) {
      case Tok::Lt: next(); gp.atoms.push_back({a, parse_expr(false)}); break;
      case Tok::Gt: next(); gp.atoms.push_back({parse_expr(false), a}); break;
      case Tok::Le: {
        next();
        Polynomial b = parse_expr(false);
        gp.atoms.push_back({a, b + one});  // a <= b  ~~>  a < b+1
        break;
      }
      case Tok::Ge: {
        next();
        Polynomial b = parse_expr(false);
        gp.atoms.push_back({b, a + one});  // a >= b  ~~>  b < a+1
        break;
      }
      case Tok::EqTok: {
        next();
        Polynomial b = parse_expr(false);
        gp.atoms.push_back({a, b + one});
        gp.atoms.push_back({b, a + one});
        break;
      }
      case Tok::Ne: {
        next();
        Polynomial b = parse_expr(false);
        gp.is_ne = true;
        gp.ne_a = {a, b};
        gp.ne_b = {b, a};
        break;
      }
      default:
        error(peek().span, "expected comparison operator");
    }
    return gp;
  }

  std::vector<Token> toks_;
  size_t idx_ = 0;
  std::vector<ParseDiagnostic> &diags_;
  Program prog_;
};

}  // namespace

ParseResult parse(const std::string &text, const std::string &filename) {
  ParseResult res;
  Lexer lex(text, filename);
  auto toks = lex.run(res.diagnostics);
  if (!res.diagnostics.empty()) return res;
  try {
    Parser p(std::move(toks), res.diagnostics);
    res.program = p.run();
  } catch (const std::exception &) {
    // diagnostics already collected
  }
  if (!res.diagnostics.empty()) res.program.reset();
  if (res.program) {
    auto diags = validate(*res.program);
    for (const auto &d : diags) res.diagnostics.push_back({{filename, 0, 0}, d.message});
    if (!diags.empty()) res.program.reset();
  }
  return res;
}

ParseResult parse_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({{path, 0, 0}, "cannot open file"});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

namespace {

std::string poly_str(const Program &prog, const Polynomial &p);

std::string call_str(const Program &prog, const FunctionCall &c) {
  std::string out = "@" + prog.locations[c.target] + "(";
  for (size_t i = 0; i < c.zeta.size(); ++i) {
    if (i) out += ", ";
    out += poly_str(prog, c.zeta[i]);
  }
  return out + ")";
}

std::string poly_str(const Program &prog, const Polynomial &p) {
  return p.str([&](int ind) {
    if (prog.is_call_ind(ind)) return call_str(prog, prog.calls[prog.call_of_ind(ind)]);
    return prog.vars[ind];
  });
}

}  // namespace

std::string pretty_print(const Program &prog) {
  std::ostringstream out;
  out << "(GOAL COMPLEXITY)\n";
  out << "(STARTTERM (FUNCTIONSYMBOLS " << prog.locations[prog.initial] << "))\n";
  out << "(VAR";
  for (const auto &v : prog.vars) out << " " << v;
  out << ")\n";
  for (const auto &[loc, var] : prog.returns)
    out << "(RETURN " << prog.locations[loc] << " " << prog.vars[var] << ")\n";
  out << "(RULES\n";
  for (const Transition &t : prog.transitions) {
    out << "  " << prog.locations[t.source] << "(";
    for (int i = 0; i < prog.nvars(); ++i) out << (i ? "," : "") << prog.vars[i];
    out << ") -> " << prog.locations[t.target] << "(";
    for (int i = 0; i < prog.nvars(); ++i) {
      if (i) out << ", ";
      out << poly_str(prog, t.update[i]);
    }
    out << ")";
    if (!t.guard.atoms.empty()) {
      out << " :|: ";
      for (size_t i = 0; i < t.guard.atoms.size(); ++i) {
        if (i) out << " && ";
        out << poly_str(prog, t.guard.atoms[i].lhs) << " < "
            << poly_str(prog, t.guard.atoms[i].rhs);
      }
    }
    out << "\n";
  }
  out << ")\n";
  return out.str();
}

}  // namespace rhobound
