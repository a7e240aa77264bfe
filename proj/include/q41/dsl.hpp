#ifndef Q41_DSL_HPP
#define Q41_DSL_HPP

// A small infix language for user-defined charts.
//
//   program := target '[' expr {',' expr} ']' [ 'on' '[' expr ',' expr ']' 'x' '[' expr ',' expr ']' ]
//   expr    := term {('+' | '-') term}
//   term    := unary {('*' | '/') unary}
//   unary   := ('-' | '+') unary | power
//   power   := primary ['^' unary]
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
//
// target is one of raw6 r41 s41 h41 r3 r31. '#' starts a comment.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "q41/error.hpp"
#include "q41/jet.hpp"
#include "q41/surfaces.hpp"

namespace q41 {

enum class DslTarget { Raw6, R41, S41, H41, R3, R31 };

inline const char* target_name(DslTarget t) {
  switch (t) {
    case DslTarget::Raw6: return "raw6";
    case DslTarget::R41: return "r41";
    case DslTarget::S41: return "s41";
    case DslTarget::H41: return "h41";
    case DslTarget::R3: return "r3";
    case DslTarget::R31: return "r31";
  }
  return "raw6";
}

inline std::size_t target_arity(DslTarget t) {
  switch (t) {
    case DslTarget::Raw6: return 6;
    case DslTarget::R41: return 4;
    case DslTarget::S41:
    case DslTarget::H41: return 5;
    case DslTarget::R3:
    case DslTarget::R31: return 3;
  }
  return 0;
}

struct DslNode {
  enum class Kind { Number, Variable, Unary, Binary, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;  // variable or function name
  char op = 0;       // '+', '-', '*', '/', '^' (binary) or '-' (unary)
  std::vector<DslNode> args;
  int line = 1, column = 1;

  bool operator==(const DslNode& o) const {
    return kind == o.kind && number == o.number && name == o.name && op == o.op && args == o.args;
  }
};

struct DslProgram {
  std::string source;
  DslTarget target = DslTarget::Raw6;
  std::vector<DslNode> components;
  std::optional<std::array<DslNode, 4>> domain;

  /// Identifiers other than u, v and pi: the parameters the program expects.
  std::set<std::string> parameters() const;
};

namespace dsl_detail {

inline const std::set<std::string>& function_names() {
  static const std::set<std::string> f{"sin", "cos", "sinh", "cosh", "exp", "sqrt"};
  return f;
}

struct Token {
  enum class Kind { Number, Ident, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Token::Kind::Number;
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) advance();
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
          std::size_t j = i_ + 1;
          if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
          if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
            while (i_ < j) advance();
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) advance();
          }
        }
        t.text = s_.substr(start, i_ - start);
        char* end = nullptr;
        t.number = std::strtod(t.text.c_str(), &end);
        if (end != t.text.c_str() + t.text.size()) {
          throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Ident;
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) advance();
        t.text = s_.substr(start, i_ - start);
      } else if (std::string("+-*/^()[],").find(c) != std::string::npos) {
        t.kind = Token::Kind::Symbol;
        t.text = std::string(1, c);
        advance();
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
      }
      out.push_back(t);
    }
  }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  DslNode single_expression() {
    DslNode e = expr();
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected trailing input");
    return e;
  }

  DslProgram program() {
    DslProgram p;
    const Token head = next();
    if (head.kind != Token::Kind::Ident) fail(head, "expected a target form");
    static const std::map<std::string, DslTarget> targets{
        {"raw6", DslTarget::Raw6}, {"r41", DslTarget::R41}, {"s41", DslTarget::S41},
        {"h41", DslTarget::H41},   {"r3", DslTarget::R3},   {"r31", DslTarget::R31}};
    auto it = targets.find(head.text);
    if (it == targets.end()) fail(head, "unknown target form '" + head.text + "'");
    p.target = it->second;
    p.components = bracket_list();
    if (p.components.size() != target_arity(p.target)) {
      throw Error(ErrorCode::ArityMismatch,
                  std::string(target_name(p.target)) + " expects " +
                      std::to_string(target_arity(p.target)) + " components, got " +
                      std::to_string(p.components.size()));
    }
    if (peek().kind == Token::Kind::Ident && peek().text == "on") {
      next();
      auto a = bracket_list();
      const Token x = next();
      if (x.kind != Token::Kind::Ident || x.text != "x") fail(x, "expected 'x' between domain intervals");
      auto b = bracket_list();
      if (a.size() != 2 || b.size() != 2) {
        throw Error(ErrorCode::ArityMismatch, "domain intervals take two bounds each");
      }
      p.domain = std::array<DslNode, 4>{a[0], a[1], b[0], b[1]};
    }
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }

  const Token& peek() const { return t_[pos_]; }
  Token next() {
    Token t = t_[pos_];
    if (pos_ + 1 < t_.size()) ++pos_;
    return t;
  }
  bool accept(const char* sym) {
    if (peek().kind == Token::Kind::Symbol && peek().text == sym) {
      next();
      return true;
    }
    return false;
  }
  void expect(const char* sym) {
    if (!accept(sym)) fail(peek(), std::string("expected '") + sym + "'");
  }

  std::vector<DslNode> bracket_list() {
    expect("[");
    std::vector<DslNode> out{expr()};
    while (accept(",")) out.push_back(expr());
    expect("]");
    return out;
  }

  static DslNode binary(char op, DslNode a, DslNode b, const Token& at) {
    DslNode n;
    n.kind = DslNode::Kind::Binary;
    n.op = op;
    n.line = at.line;
    n.column = at.column;
    n.args.push_back(std::move(a));
    n.args.push_back(std::move(b));
    return n;
  }

  DslNode expr() {
    DslNode lhs = term();
    for (;;) {
      const Token at = peek();
      if (accept("+")) {
        lhs = binary('+', std::move(lhs), term(), at);
      } else if (accept("-")) {
        lhs = binary('-', std::move(lhs), term(), at);
      } else {
        return lhs;
      }
    }
  }

  DslNode term() {
    DslNode lhs = unary();
    for (;;) {
      const Token at = peek();
      if (accept("*")) {
        lhs = binary('*', std::move(lhs), unary(), at);
      } else if (accept("/")) {
        lhs = binary('/', std::move(lhs), unary(), at);
      } else {
        return lhs;
      }
    }
  }

  DslNode unary() {
    const Token at = peek();
    if (accept("-")) {
      DslNode n;
      n.kind = DslNode::Kind::Unary;
      n.op = '-';
      n.line = at.line;
      n.column = at.column;
      n.args.push_back(unary());
      return n;
    }
    if (accept("+")) return unary();
    return power();
  }

  DslNode power() {
    DslNode base = primary();
    const Token at = peek();
    if (accept("^")) return binary('^', std::move(base), unary(), at);
    return base;
  }

  DslNode primary() {
    const Token t = next();
    DslNode n;
    n.line = t.line;
    n.column = t.column;
    if (t.kind == Token::Kind::Number) {
      n.kind = DslNode::Kind::Number;
      n.number = t.number;
      return n;
    }
    if (t.kind == Token::Kind::Ident) {
      if (accept("(")) {
        if (!function_names().count(t.text)) {
          throw Error(ErrorCode::UnknownIdentifier, "unknown function '" + t.text + "' at " +
                                                        std::to_string(t.line) + ":" +
                                                        std::to_string(t.column));
        }
        n.kind = DslNode::Kind::Call;
        n.name = t.text;
        n.args.push_back(expr());
        while (accept(",")) n.args.push_back(expr());
        expect(")");
        if (n.args.size() != 1) {
          throw Error(ErrorCode::ArityMismatch, t.text + " takes one argument, got " +
                                                    std::to_string(n.args.size()));
        }
        return n;
      }
      n.kind = DslNode::Kind::Variable;
      n.name = t.text;
      return n;
    }
    if (t.kind == Token::Kind::Symbol && t.text == "(") {
      DslNode inner = expr();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::End) fail(t, "unexpected end of input");
    fail(t, "unexpected '" + t.text + "'");
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

inline void collect_identifiers(const DslNode& n, std::set<std::string>& out) {
  if (n.kind == DslNode::Kind::Variable && n.name != "u" && n.name != "v" && n.name != "pi") {
    out.insert(n.name);
  }
  for (const auto& a : n.args) collect_identifiers(a, out);
}

inline bool depends_on_coordinates(const DslNode& n) {
  if (n.kind == DslNode::Kind::Variable) return n.name == "u" || n.name == "v";
  for (const auto& a : n.args) {
    if (depends_on_coordinates(a)) return true;
  }
  return false;
}

struct Scope {
  const std::map<std::string, double>& params;
  CJet u, v;
  int order;
};

inline double lookup(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "pi") return std::numbers::pi;
  auto it = params.find(name);
  if (it == params.end()) throw Error(ErrorCode::UnknownIdentifier, "unknown identifier '" + name + "'");
  return it->second;
}

inline double eval_constant(const DslNode& n, const std::map<std::string, double>& params) {
  switch (n.kind) {
    case DslNode::Kind::Number: return n.number;
    case DslNode::Kind::Variable:
      if (n.name == "u" || n.name == "v") {
        throw Error(ErrorCode::DomainError, "coordinate '" + n.name + "' in a constant expression");
      }
      return lookup(n.name, params);
    case DslNode::Kind::Unary: return -eval_constant(n.args[0], params);
    case DslNode::Kind::Binary: {
      const double a = eval_constant(n.args[0], params), b = eval_constant(n.args[1], params);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: return std::pow(a, b);
      }
    }
    case DslNode::Kind::Call: {
      const double a = eval_constant(n.args[0], params);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "sinh") return std::sinh(a);
      if (n.name == "cosh") return std::cosh(a);
      if (n.name == "exp") return std::exp(a);
      if (a < 0.0) throw Error(ErrorCode::DomainError, "sqrt of a negative constant");
      return std::sqrt(a);
    }
  }
  return 0.0;
}

inline CJet eval_jet(const DslNode& n, const Scope& sc) {
  switch (n.kind) {
    case DslNode::Kind::Number: return CJet(sc.order, Complex(n.number));
    case DslNode::Kind::Variable:
      if (n.name == "u") return sc.u;
      if (n.name == "v") return sc.v;
      return CJet(sc.order, Complex(lookup(n.name, sc.params)));
    case DslNode::Kind::Unary: return -eval_jet(n.args[0], sc);
    case DslNode::Kind::Binary: {
      if (n.op == '^') {
        const CJet base = eval_jet(n.args[0], sc);
        if (!depends_on_coordinates(n.args[1])) {
          const double e = eval_constant(n.args[1], sc.params);
          if (e == std::round(e) && std::abs(e) <= 64.0) return pow(base, static_cast<int>(e));
          return pow(base, e);
        }
        return exp(eval_jet(n.args[1], sc) * log(base));
      }
      const CJet a = eval_jet(n.args[0], sc), b = eval_jet(n.args[1], sc);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        default: return a / b;
      }
    }
    case DslNode::Kind::Call: {
      const CJet a = eval_jet(n.args[0], sc);
      if (n.name == "sin") return sin(a);
      if (n.name == "cos") return cos(a);
      if (n.name == "sinh") return sinh(a);
      if (n.name == "cosh") return cosh(a);
      if (n.name == "exp") return exp(a);
      return sqrt(a);
    }
  }
  return CJet(sc.order, Complex(0.0));
}

inline int precedence(const DslNode& n) {
  switch (n.kind) {
    case DslNode::Kind::Binary:
      if (n.op == '+' || n.op == '-') return 1;
      if (n.op == '*' || n.op == '/') return 2;
      return 4;
    case DslNode::Kind::Unary: return 3;
    default: return 5;
  }
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void print(const DslNode& n, std::ostream& os) {
  auto child = [&os](const DslNode& c, bool wrap) {
    if (wrap) os << '(';
    print(c, os);
    if (wrap) os << ')';
  };
  switch (n.kind) {
    case DslNode::Kind::Number: os << format_number(n.number); break;
    case DslNode::Kind::Variable: os << n.name; break;
    case DslNode::Kind::Unary:
      os << '-';
      child(n.args[0], precedence(n.args[0]) < 3);
      break;
    case DslNode::Kind::Call:
      os << n.name << '(';
      print(n.args[0], os);
      os << ')';
      break;
    case DslNode::Kind::Binary: {
      const int p = precedence(n);
      if (n.op == '^') {
        // right-associative: the base needs parentheses at equal precedence
        child(n.args[0], precedence(n.args[0]) <= p);
        os << '^';
        child(n.args[1], precedence(n.args[1]) < 3);
      } else {
        child(n.args[0], precedence(n.args[0]) < p);
        os << ' ' << n.op << ' ';
        child(n.args[1], precedence(n.args[1]) <= p);
      }
      break;
    }
  }
}

}  // namespace dsl_detail

inline std::set<std::string> DslProgram::parameters() const {
  std::set<std::string> out;
  for (const auto& c : components) dsl_detail::collect_identifiers(c, out);
  if (domain) {
    for (const auto& c : *domain) dsl_detail::collect_identifiers(c, out);
  }
  return out;
}

inline DslProgram dsl_parse(const std::string& source) {
  dsl_detail::Lexer lex(source);
  dsl_detail::Parser parser(lex.run());
  DslProgram p = parser.program();
  p.source = source;
  return p;
}

inline DslProgram dsl_parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return dsl_parse(ss.str());
}

/// Parses a lone expression, e.g. a parameter value such as "3/2" or "2*pi".
inline DslNode dsl_parse_expression(const std::string& text) {
  dsl_detail::Lexer lex(text);
  dsl_detail::Parser parser(lex.run());
  return parser.single_expression();
}

/// Value of an expression that must not mention u or v.
inline double dsl_constant(const std::string& text, const std::map<std::string, double>& params = {}) {
  const double x = dsl_detail::eval_constant(dsl_parse_expression(text), params);
  if (!std::isfinite(x)) throw Error(ErrorCode::DomainError, "'" + text + "' is not a finite number");
  return x;
}

/// Canonical text of the program; parsing it gives back an equal tree.
inline std::string dsl_print(const DslProgram& p) {
  std::ostringstream os;
  os << target_name(p.target) << " [";
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    if (i) os << ", ";
    dsl_detail::print(p.components[i], os);
  }
  os << ']';
  if (p.domain) {
    const auto& d = *p.domain;
    os << " on [";
    dsl_detail::print(d[0], os);
    os << ", ";
    dsl_detail::print(d[1], os);
    os << "] x [";
    dsl_detail::print(d[2], os);
    os << ", ";
    dsl_detail::print(d[3], os);
    os << ']';
  }
  return os.str();
}

/// Lift from coordinate jets, routed through the embedding of the target form.
inline JetVec6 dsl_eval_jets(const DslProgram& p, const std::map<std::string, double>& params,
                             const CJet& u, const CJet& v) {
  const dsl_detail::Scope sc{params, u, v, u.order()};
  std::vector<CJet> x;
  x.reserve(p.components.size());
  for (const auto& c : p.components) x.push_back(dsl_detail::eval_jet(c, sc));
  switch (p.target) {
    case DslTarget::Raw6: {
      JetVec6 r;
      for (std::size_t i = 0; i < kDim; ++i) r[i] = x[i];
      return r;
    }
    case DslTarget::R41: return embed_flat({x[0], x[1], x[2], x[3]});
    case DslTarget::S41: return embed_desitter({x[0], x[1], x[2], x[3], x[4]});
    case DslTarget::H41: return embed_antidesitter({x[0], x[1], x[2], x[3], x[4]});
    case DslTarget::R3: return lift_euclidean3({x[0], x[1], x[2]});
    case DslTarget::R31: return lift_minkowski3({x[0], x[1], x[2]});
  }
  return {};
}

inline JetVec6 dsl_eval(const DslProgram& p, const std::map<std::string, double>& params, double u,
                        double v, int order) {
  auto [ju, jv] = seed_point<Complex>(u, v, order);
  return dsl_eval_jets(p, params, ju, jv);
}

inline constexpr Domain kDslDefaultDomain{0.0, 1.0, 0.0, 1.0};

/// Wraps a program as a chart; unknown identifiers are reported here, not at first use.
inline SurfaceChart dsl_chart(const DslProgram& program, const std::map<std::string, double>& params,
                              std::string name = "dsl") {
  for (const auto& id : program.parameters()) {
    if (!params.count(id)) throw Error(ErrorCode::UnknownIdentifier, "unknown identifier '" + id + "'");
  }
  Domain dom = kDslDefaultDomain;
  if (program.domain) {
    const auto& d = *program.domain;
    dom = {dsl_detail::eval_constant(d[0], params), dsl_detail::eval_constant(d[1], params),
           dsl_detail::eval_constant(d[2], params), dsl_detail::eval_constant(d[3], params)};
    if (!(dom.u1 > dom.u0 && dom.v1 > dom.v0)) {
      throw Error(ErrorCode::DomainError, "empty parameter domain");
    }
  }
  auto shared = std::make_shared<const DslProgram>(program);
  return SurfaceChart::from_lift(std::move(name), params, dom, false, false,
                                 [shared, params](const CJet& u, const CJet& v) {
                                   return dsl_eval_jets(*shared, params, u, v);
                                 });
}

}  // namespace q41

#endif  // Q41_DSL_HPP
