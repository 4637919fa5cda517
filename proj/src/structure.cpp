#include "srm/structure.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "srm/errors.hpp"
#include "srm/flag.hpp"

namespace srm {

bool Box::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double slack) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i].get_d() - slack || x[i] > hi[i].get_d() + slack) return false;
  return true;
}

std::string Box::to_string() const {
  std::string s;
  for (int i = 0; i < dim(); ++i) {
    if (i) s += " x ";
    s += "[" + lo[i].get_str() + "," + hi[i].get_str() + "]";
  }
  return s;
}

Eigen::VectorXd Stratum::point(const Eigen::Ref<const Eigen::VectorXd>& s) const {
  Eigen::VectorXd x(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) x[static_cast<Eigen::Index>(i)] = map[i].eval(s);
  return x;
}

std::vector<Rational> Stratum::point(std::span<const Rational> s) const {
  std::vector<Rational> x;
  for (const auto& c : map) x.push_back(c.eval(s));
  return x;
}

Eigen::MatrixXd Stratum::jacobian(const Eigen::Ref<const Eigen::VectorXd>& s) const {
  Eigen::MatrixXd j(map.size(), k);
  for (std::size_t i = 0; i < map.size(); ++i)
    for (int a = 0; a < k; ++a) j(static_cast<Eigen::Index>(i), a) = map[i].diff(a).eval(s);
  return j;
}

const Stratum& SRStructure::stratum(const std::string& name) const {
  for (const auto& s : strata)
    if (s.name == name) return s;
  throw ValidationError("vf-dsl.unknown-stratum", "no stratum named '" + name + "'");
}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  Lexer(const std::string& src, int line0 = 1) : src_(src), line_(line0) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '\n') {
        out.push_back({Tok::Symbol, "\n", line_, col_});
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        int l = line_, co = col_;
        std::string s;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          s += src_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, s, l, co});
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        int l = line_, co = col_;
        std::string s;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
          s += src_[pos_];
          advance();
        }
        // scientific exponent: 1e-3
        if (pos_ + 1 < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E') &&
            (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) ||
             ((src_[pos_ + 1] == '-' || src_[pos_ + 1] == '+') && pos_ + 2 < src_.size() &&
              std::isdigit(static_cast<unsigned char>(src_[pos_ + 2]))))) {
          s += src_[pos_];
          advance();
          s += src_[pos_];
          advance();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            s += src_[pos_];
            advance();
          }
        }
        out.push_back({Tok::Number, s, l, co});
      } else if (std::string("+-*/^()[],=:;").find(c) != std::string::npos) {
        out.push_back({Tok::Symbol, std::string(1, c), line_, col_});
        advance();
      } else {
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_symbol(const std::string& s) const { return peek().kind == Tok::Symbol && peek().text == s; }
  bool at_ident(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().line, peek().col, msg); }

  void expect_symbol(const std::string& s) {
    if (!at_symbol(s)) fail("expected '" + s + "'");
    ++pos_;
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next().text;
  }
  void skip_newlines() {
    while (at_symbol("\n")) ++pos_;
  }

  Rational number() {
    bool neg = false;
    while (at_symbol("-") || at_symbol("+")) {
      if (next().text == "-") neg = !neg;
    }
    if (peek().kind != Tok::Number) fail("expected number");
    Rational q = rational_from_string(next().text);
    if (at_symbol("/")) {
      ++pos_;
      if (peek().kind != Tok::Number) fail("expected denominator");
      Rational d = rational_from_string(next().text);
      if (d == 0) fail("zero denominator");
      q /= d;
    }
    return neg ? Rational(-q) : q;
  }

  // expr := term (('+'|'-') term)*
  Polynomial expr(int nvars, const std::string& prefix) {
    Polynomial r = term(nvars, prefix);
    while (at_symbol("+") || at_symbol("-")) {
      bool minus = next().text == "-";
      Polynomial t = term(nvars, prefix);
      if (minus)
        r -= t;
      else
        r += t;
    }
    return r;
  }

  // term := unary (('*'|'/') unary)*
  Polynomial term(int nvars, const std::string& prefix) {
    Polynomial r = unary(nvars, prefix);
    while (at_symbol("*") || at_symbol("/")) {
      const Token& op = next();
      int l = peek().line, c = peek().col;
      Polynomial f = unary(nvars, prefix);
      if (op.text == "*") {
        r = r * f;
      } else {
        if (!f.is_constant()) throw ParseError(l, c, "division by a non-constant expression");
        Rational d = f.constant_term();
        if (d == 0) throw ParseError(l, c, "division by zero");
        r *= Rational(1 / d);
      }
    }
    return r;
  }

  Polynomial unary(int nvars, const std::string& prefix) {
    if (at_symbol("-")) {
      ++pos_;
      return -unary(nvars, prefix);
    }
    if (at_symbol("+")) {
      ++pos_;
      return unary(nvars, prefix);
    }
    return power(nvars, prefix);
  }

  Polynomial power(int nvars, const std::string& prefix) {
    Polynomial base = primary(nvars, prefix);
    if (at_symbol("^")) {
      ++pos_;
      if (peek().kind != Tok::Number) fail("expected nonnegative integer exponent");
      const Token& t = next();
      if (t.text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(t.line, t.col, "exponent must be a nonnegative integer");
      return base.pow(static_cast<unsigned>(std::stoul(t.text)));
    }
    return base;
  }

  Polynomial primary(int nvars, const std::string& prefix) {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++pos_;
      return Polynomial::constant(nvars, rational_from_string(t.text));
    }
    if (t.kind == Tok::Ident) {
      ++pos_;
      if (t.text.rfind(prefix, 0) == 0 && t.text.size() > prefix.size() &&
          t.text.find_first_not_of("0123456789", prefix.size()) == std::string::npos) {
        int idx = std::stoi(t.text.substr(prefix.size()));
        if (idx < 1 || idx > nvars)
          throw ParseError(t.line, t.col,
                           "unknown variable index '" + t.text + "' (valid: " + prefix + "1.." + prefix +
                               std::to_string(nvars) + ")");
        return Polynomial::variable(nvars, idx - 1);
      }
      throw ParseError(t.line, t.col, "unknown identifier '" + t.text + "'");
    }
    if (at_symbol("(")) {
      ++pos_;
      Polynomial e = expr(nvars, prefix);
      expect_symbol(")");
      return e;
    }
    fail("expected expression");
  }

  std::vector<Polynomial> tuple(int nvars, const std::string& prefix) {
    expect_symbol("(");
    std::vector<Polynomial> out;
    out.push_back(expr(nvars, prefix));
    while (at_symbol(",")) {
      ++pos_;
      out.push_back(expr(nvars, prefix));
    }
    expect_symbol(")");
    return out;
  }

  Box box() {
    Box b;
    for (;;) {
      expect_symbol("[");
      Rational lo = number();
      expect_symbol(",");
      Rational hi = number();
      if (!(lo < hi)) fail("box interval must satisfy lo < hi");
      expect_symbol("]");
      b.lo.push_back(lo);
      b.hi.push_back(hi);
      if (at_ident("x"))
        ++pos_;
      else
        break;
    }
    return b;
  }

  bool done() const { return peek().kind == Tok::End; }
  void end_statement() {
    if (!(at_symbol("\n") || done())) fail("expected end of line");
  }
  int line() const { return peek().line; }
  int col() const { return peek().col; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void check_density(const SRStructure& s) {
  // sample a tensor grid including corners
  const int per_axis = s.dim <= 3 ? 5 : 3;
  int total = 1;
  for (int i = 0; i < s.dim; ++i) total *= per_axis;
  Eigen::VectorXd lo = s.box.lower(), hi = s.box.upper(), x(s.dim);
  int sign = 0;
  for (int idx = 0; idx < total; ++idx) {
    int r = idx;
    for (int i = 0; i < s.dim; ++i) {
      x[i] = lo[i] + (hi[i] - lo[i]) * (r % per_axis) / double(per_axis - 1);
      r /= per_axis;
    }
    double v = s.volume.eval(x);
    int sg = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign))
      throw ValidationError("vf-dsl.volume", "volume density vanishes or changes sign on the box");
    sign = sg;
  }
}

}  // namespace

Expr parse_expression(const std::string& text, int nvars, const std::string& prefix) {
  std::string one_line = text;
  for (auto& c : one_line)
    if (c == '\n') c = ' ';
  Parser p(Lexer(one_line).run());
  Polynomial e = p.expr(nvars, prefix);
  if (!p.done()) p.fail("trailing input after expression");
  return e;
}

SRStructure parse_structure(const std::string& text, const ParseOptions& opts) {
  Parser p(Lexer(text).run());
  SRStructure s;
  bool have_volume = false, have_box = false;
  std::set<std::string> names;
  struct PendingField {
    std::string name;
    std::vector<Polynomial> comps;
    int line, col;
  };
  std::vector<PendingField> pending;

  for (p.skip_newlines(); !p.done(); p.skip_newlines()) {
    int line = p.line(), col = p.col();
    std::string kw = p.expect_ident();
    if (kw == "dim") {
      p.expect_symbol("=");
      Rational d = p.number();
      if (d.get_den() != 1 || d < 1) throw ParseError(line, col, "dim must be a positive integer");
      if (s.dim != 0) throw ParseError(line, col, "dim declared twice");
      s.dim = static_cast<int>(d.get_num().get_si());
    } else if (kw == "field") {
      if (s.dim == 0) throw ParseError(line, col, "'dim' must precede fields");
      std::string name = p.expect_ident();
      if (!names.insert(name).second) throw ParseError(line, col, "duplicate field name '" + name + "'");
      p.expect_symbol("=");
      pending.push_back({name, p.tuple(s.dim, "x"), line, col});
    } else if (kw == "volume") {
      if (s.dim == 0) throw ParseError(line, col, "'dim' must precede volume");
      p.expect_symbol("=");
      s.volume = p.expr(s.dim, "x");
      have_volume = true;
    } else if (kw == "box") {
      p.expect_symbol("=");
      s.box = p.box();
      have_box = true;
    } else if (kw == "probe") {
      p.expect_symbol("=");
      p.expect_symbol("(");
      s.probe.push_back(p.number());
      while (p.at_symbol(",")) {
        p.next();
        s.probe.push_back(p.number());
      }
      p.expect_symbol(")");
    } else if (kw == "stratum") {
      if (s.dim == 0) throw ParseError(line, col, "'dim' must precede strata");
      Stratum st;
      st.name = p.expect_ident();
      p.expect_symbol(":");
      if (p.expect_ident() != "k") p.fail("expected 'k'");
      p.expect_symbol("=");
      Rational k = p.number();
      if (k.get_den() != 1 || k < 1 || k > s.dim) throw ParseError(line, col, "stratum dimension out of range");
      st.k = static_cast<int>(k.get_num().get_si());
      p.expect_symbol(";");
      if (p.expect_ident() != "map") p.fail("expected 'map'");
      p.expect_symbol("=");
      st.map = p.tuple(st.k, "t");
      if (static_cast<int>(st.map.size()) != s.dim)
        throw ParseError(line, col, "dimension mismatch: stratum map has " + std::to_string(st.map.size()) +
                                        " components, dim = " + std::to_string(s.dim));
      p.expect_symbol(";");
      if (p.expect_ident() != "parambox") p.fail("expected 'parambox'");
      p.expect_symbol("=");
      st.parambox = p.box();
      if (st.parambox.dim() != st.k) throw ParseError(line, col, "parambox dimension must equal k");
      s.strata.push_back(std::move(st));
    } else {
      throw ParseError(line, col, "unknown statement '" + kw + "'");
    }
    p.end_statement();
  }

  if (s.dim == 0) throw ValidationError("vf-dsl.dimension", "missing 'dim' declaration");
  for (auto& f : pending) {
    if (static_cast<int>(f.comps.size()) != s.dim)
      throw ParseError(f.line, f.col,
                       "dimension mismatch: field '" + f.name + "' has " + std::to_string(f.comps.size()) +
                           " components, dim = " + std::to_string(s.dim));
    s.field_names.push_back(f.name);
    s.fields.emplace_back(std::move(f.comps));
  }
  if (s.fields.empty()) throw ValidationError("vf-dsl.empty-family", "m >= 1 required: no fields declared");
  if (!have_volume) s.volume = Polynomial::constant(s.dim, 1);
  if (!have_box) {
    s.box.lo.assign(s.dim, Rational(-1));
    s.box.hi.assign(s.dim, Rational(1));
  }
  if (s.box.dim() != s.dim)
    throw ValidationError("vf-dsl.dimension", "dimension mismatch: box has " + std::to_string(s.box.dim()) +
                                                  " intervals, dim = " + std::to_string(s.dim));
  if (s.probe.empty()) {
    for (int i = 0; i < s.dim; ++i) s.probe.push_back((s.box.lo[i] + s.box.hi[i]) / 2);
  }
  if (static_cast<int>(s.probe.size()) != s.dim)
    throw ValidationError("vf-dsl.dimension", "dimension mismatch: probe point has wrong length");
  check_density(s);
  if (opts.check_generating) {
    FlagOptions fo;
    fo.depth_cap = opts.depth_cap;
    flag_at(s, to_double(s.probe), fo);  // throws NotBracketGenerating
  }
  return s;
}

SRStructure load_structure(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cli.io", "cannot open structure file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_structure(ss.str(), opts);
}

std::string to_text(const SRStructure& s) {
  std::ostringstream os;
  os << "dim = " << s.dim << "\n";
  for (int i = 0; i < s.m(); ++i) os << "field " << s.field_names[i] << " = " << s.fields[i].to_string() << "\n";
  os << "volume = " << s.volume.to_string() << "\n";
  os << "box = " << s.box.to_string() << "\n";
  os << "probe = (";
  for (int i = 0; i < s.dim; ++i) os << (i ? ", " : "") << s.probe[i].get_str();
  os << ")\n";
  for (const auto& st : s.strata) {
    os << "stratum " << st.name << " : k = " << st.k << "; map = (";
    for (std::size_t i = 0; i < st.map.size(); ++i) os << (i ? ", " : "") << st.map[i].to_string("t");
    os << "); parambox = " << st.parambox.to_string() << "\n";
  }
  return os.str();
}

}  // namespace srm
