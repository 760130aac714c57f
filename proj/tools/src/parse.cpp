#include <cctype>
#include <set>
#include <sstream>

#include "session.hpp"

namespace stmtoda {

using namespace stm;

ParseError::ParseError(int line, int column, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

CommandError::CommandError(int line, const std::string& command, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + " (" + command + "): " + msg), line_(line) {}

namespace {

enum class Kind { Ident, Int, Punct, End };

struct Lexeme {
  Kind kind;
  std::string text;
  int column;
};

std::vector<Lexeme> lex(const std::string& line, int lineno) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_' || line[j] == '\''))
        ++j;
      out.push_back({Kind::Ident, line.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j - i > 9) throw ParseError(lineno, col, "integer too large");
      out.push_back({Kind::Int, line.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Kind::Punct, "->", col});
      i += 2;
      continue;
    }
    if (std::string("[](),:=+-*^").find(c) != std::string::npos) {
      out.push_back({Kind::Punct, std::string(1, c), col});
      ++i;
      continue;
    }
    throw ParseError(lineno, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Kind::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

class Cursor {
 public:
  Cursor(std::vector<Lexeme> toks, int line) : toks_(std::move(toks)), line_(line) {}

  const Lexeme& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Kind::End; }
  bool is(const std::string& punct) const { return peek().kind == Kind::Punct && peek().text == punct; }
  const Lexeme& next() {
    const Lexeme& t = toks_[pos_];
    if (t.kind != Kind::End) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] void fail_at(const Lexeme& t, const std::string& msg) const { throw ParseError(line_, t.column, msg); }

  void expect(const std::string& punct) {
    if (!is(punct)) fail("expected '" + punct + "'" + found());
    next();
  }
  const Lexeme& ident(const std::string& what) {
    if (peek().kind != Kind::Ident) fail("expected " + what + found());
    return next();
  }
  int integer(const std::string& what) {
    bool neg = false;
    if (is("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Kind::Int) fail("expected " + what + found());
    const int v = std::stoi(next().text);
    return neg ? -v : v;
  }
  void end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  int line() const { return line_; }

 private:
  std::string found() const { return at_end() ? ", found end of line" : ", found '" + peek().text + "'"; }

  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  int line_;
};

std::vector<int> int_list(Cursor& c) {
  std::vector<int> out;
  c.expect("[");
  if (!c.is("]")) {
    out.push_back(c.integer("integer"));
    while (c.is(",")) {
      c.next();
      out.push_back(c.integer("integer"));
    }
  }
  c.expect("]");
  return out;
}

std::vector<std::vector<int>> int_matrix(Cursor& c) {
  std::vector<std::vector<int>> rows;
  c.expect("[");
  if (!c.is("]")) {
    rows.push_back(int_list(c));
    while (c.is(",")) {
      c.next();
      rows.push_back(int_list(c));
    }
  }
  c.expect("]");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) c.fail("matrix rows have different lengths");
  return rows;
}

FpMatrix to_matrix(int p, int rows, int cols, const std::vector<std::vector<int>>& m, Cursor& c, const Lexeme& at) {
  if (static_cast<int>(m.size()) != rows || (rows > 0 && static_cast<int>(m.front().size()) != cols))
    c.fail_at(at, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  std::vector<std::vector<long long>> ll;
  for (const auto& r : m) ll.emplace_back(r.begin(), r.end());
  return rows == 0 ? FpMatrix(p, 0, cols) : FpMatrix::from_rows(p, ll);
}

int mu_exponent(Cursor& c) {
  const Lexeme& mu = c.ident("mu(...)");
  if (mu.text != "mu") c.fail_at(mu, "expected mu(...), found '" + mu.text + "'");
  c.expect("(");
  int j = 0;
  if (c.peek().kind == Kind::Int) {
    const Lexeme& one = c.next();
    if (one.text != "1") c.fail_at(one, "expected 1 or x^j");
  } else {
    const Lexeme& x = c.ident("1 or x^j");
    if (x.text != "x") c.fail_at(x, "expected 1 or x^j");
    j = 1;
    if (c.is("^")) {
      c.next();
      j = c.integer("exponent");
      if (j < 0) c.fail("negative exponent");
    }
  }
  c.expect(")");
  return j;
}

// term := ['-'] [Int '*'] 'mu' '(' ('1' | 'x' ['^' Int]) ')' | Int
// poly := term (('+' | '-') term)*
Vec poly(Cursor& c, int p) {
  Vec out;
  auto add = [&](int j, long long coef) {
    if (static_cast<int>(out.size()) <= j) out.resize(static_cast<std::size_t>(j) + 1, 0);
    out[static_cast<std::size_t>(j)] = fp::reduce(out[static_cast<std::size_t>(j)] + coef, p);
  };
  long long sign = 1;
  if (c.is("-")) {
    c.next();
    sign = -1;
  }
  while (true) {
    long long coef = sign;
    bool constant_zero = false;
    if (c.peek().kind == Kind::Int) {
      const Lexeme& n = c.next();
      if (c.is("*")) {
        c.next();
        coef *= std::stoll(n.text);
      } else if (n.text == "0") {
        constant_zero = true;
      } else {
        c.fail_at(n, "a bare constant must be 0; write c*mu(...)");
      }
    }
    if (!constant_zero) add(mu_exponent(c), coef);
    if (c.is("+")) {
      sign = 1;
    } else if (c.is("-")) {
      sign = -1;
    } else {
      break;
    }
    c.next();
  }
  return out;
}

std::vector<std::vector<Vec>> poly_matrix(Cursor& c, int p) {
  std::vector<std::vector<Vec>> rows;
  c.expect("[");
  while (true) {
    std::vector<Vec> row;
    c.expect("[");
    row.push_back(poly(c, p));
    while (c.is(",")) {
      c.next();
      row.push_back(poly(c, p));
    }
    c.expect("]");
    rows.push_back(std::move(row));
    if (!c.is(",")) break;
    c.next();
  }
  c.expect("]");
  return rows;
}

const std::set<std::string> kCommands = {"sthom", "cone",  "fiber",   "bracket", "nbracket", "adams",
                                         "page",  "dr",    "drforms", "heller",  "sparse",   "selftest"};

class Parser {
 public:
  Session run(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      Cursor c(lex(line, lineno), lineno);
      if (c.at_end()) continue;
      const Lexeme& head = c.ident("a declaration or command");
      if (head.text == "ring") {
        ring_decl(c, head);
      } else if (head.text == "module") {
        need_ring(c, head);
        module_decl(c);
      } else if (head.text == "map") {
        need_ring(c, head);
        map_decl(c);
      } else if (kCommands.count(head.text)) {
        need_ring(c, head);
        command(c, head, line);
      } else {
        c.fail_at(head, "unknown keyword '" + head.text + "'");
      }
    }
    if (!s_.ring) throw ParseError(lineno + 1, 1, "missing ring declaration");
    return std::move(s_);
  }

 private:
  void need_ring(Cursor& c, const Lexeme& head) {
    if (!s_.ring) c.fail_at(head, "'" + head.text + "' before the ring declaration");
  }

  void ring_decl(Cursor& c, const Lexeme& head) {
    if (s_.ring) c.fail_at(head, "ring declared twice");
    std::optional<int> p, m;
    while (!c.at_end()) {
      const Lexeme& key = c.ident("p= or m=");
      c.expect("=");
      const Lexeme& val = c.peek();
      const int v = c.integer("integer");
      if (key.text == "p") {
        if (!is_prime(v)) c.fail_at(val, "p must be prime");
        p = v;
      } else if (key.text == "m") {
        if (v < 1) c.fail_at(val, "m must be positive");
        m = v;
      } else {
        c.fail_at(key, "unknown ring parameter '" + key.text + "'");
      }
    }
    if (!p || !m) c.fail("ring needs p= and m=");
    s_.ring = Ring(*p, *m);
  }

  void declare(Cursor& c, const Lexeme& name) {
    if (s_.modules.count(name.text) || s_.maps.count(name.text)) c.fail_at(name, "'" + name.text + "' already declared");
    if (name.text == "mu" || name.text == "x" || name.text == "matrix" || name.text == "blocks")
      c.fail_at(name, "'" + name.text + "' is reserved");
  }

  void module_decl(Cursor& c) {
    const Lexeme& name = c.ident("module name");
    declare(c, name);
    c.expect("=");
    const Lexeme& body = c.peek();
    RModule M;
    try {
      if (c.is("[")) {
        std::vector<int> parts = int_list(c);
        for (int a : parts)
          if (a < 1 || a > s_.ring->m) c.fail_at(body, "block sizes must lie in 1.." + std::to_string(s_.ring->m));
        M = module_from_partition(*s_.ring, parts);
      } else {
        const Lexeme& kw = c.ident("[partition] or matrix");
        if (kw.text != "matrix") c.fail_at(kw, "expected [partition] or matrix");
        const Lexeme& at = c.peek();
        auto rows = int_matrix(c);
        const int n = static_cast<int>(rows.size());
        M = RModule(*s_.ring, to_matrix(s_.ring->p, n, n, rows, c, at));
      }
    } catch (const stm::Error& e) {
      c.fail_at(body, e.what());
    }
    c.end();
    s_.modules.emplace(name.text, M);
    s_.order.push_back(name.text);
  }

  const RModule& module_ref(Cursor& c) {
    const Lexeme& n = c.ident("module name");
    auto it = s_.modules.find(n.text);
    if (it == s_.modules.end()) c.fail_at(n, "unknown module '" + n.text + "'");
    return it->second;
  }

  void map_decl(Cursor& c) {
    const Lexeme& name = c.ident("map name");
    declare(c, name);
    c.expect(":");
    const RModule A = module_ref(c);
    c.expect("->");
    const RModule B = module_ref(c);
    c.expect("=");
    const Lexeme& body = c.peek();
    const int p = s_.ring->p;
    RMap f;
    try {
      if (c.peek().kind == Kind::Ident && c.peek().text == "matrix") {
        c.next();
        const Lexeme& at = c.peek();
        auto rows = int_matrix(c);
        f = RMap(A, B, to_matrix(p, B.dim(), A.dim(), rows, c, at));
      } else if (c.peek().kind == Kind::Ident && c.peek().text == "blocks") {
        c.next();
        const Lexeme& at = c.peek();
        auto polys = poly_matrix(c, p);
        const std::size_t rows = static_cast<std::size_t>(B.num_blocks());
        const std::size_t cols = static_cast<std::size_t>(A.num_blocks());
        if (polys.size() != rows || polys.front().size() != cols)
          c.fail_at(at, "expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " blocks (target blocks by source blocks)");
        for (const auto& r : polys)
          if (r.size() != cols) c.fail_at(at, "block rows have different lengths");
        f = map_from_blocks(A, B, polys);
      } else {
        if (A.num_blocks() != 1 || B.num_blocks() != 1)
          c.fail_at(body, "mu(...) needs single-block modules; use blocks [[...]]");
        f = map_from_blocks(A, B, {{poly(c, p)}});
      }
    } catch (const stm::Error& e) {
      c.fail_at(body, e.what());
    }
    c.end();
    s_.maps.emplace(name.text, StableMap(f));
    s_.order.push_back(name.text);
  }

  void command(Cursor& c, const Lexeme& head, const std::string& source) {
    Command cmd;
    cmd.line = c.line();
    cmd.name = head.text;
    std::size_t a = source.find_first_not_of(" \t");
    std::size_t b = source.find('#');
    std::string src = source.substr(a, b == std::string::npos ? std::string::npos : b - a);
    while (!src.empty() && std::isspace(static_cast<unsigned char>(src.back()))) src.pop_back();
    cmd.source = src;
    while (!c.at_end()) {
      const Lexeme& t = c.peek();
      if (c.is("[")) {
        std::vector<int> v = int_list(c);
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        cmd.args.push_back({s + "]", t.column});
      } else if (t.kind == Kind::Ident) {
        c.next();
        if (c.is("=")) {
          c.next();
          const Lexeme& v = c.peek();
          std::string val = v.kind == Kind::Ident ? c.next().text : std::to_string(c.integer("value"));
          cmd.args.push_back({t.text + "=" + val, t.column});
        } else {
          cmd.args.push_back({t.text, t.column});
        }
      } else if (t.kind == Kind::Int || c.is("-")) {
        cmd.args.push_back({std::to_string(c.integer("integer")), t.column});
      } else {
        c.fail("unexpected '" + t.text + "'");
      }
    }
    validate(c, head, cmd);
    if (cmd.name == "adams") have_adams_ = true;
    s_.commands.push_back(std::move(cmd));
  }

  // Arity, kinds and references; engine-level checks happen at run time.
  void validate(Cursor& c, const Lexeme& head, const Command& cmd) {
    const auto& a = cmd.args;
    auto fail = [&](const Token& t, const std::string& msg) { throw ParseError(cmd.line, t.column, msg); };
    auto arity = [&](std::size_t lo, std::size_t hi, const std::string& usage) {
      if (a.size() < lo || a.size() > hi) c.fail_at(head, "usage: " + usage);
    };
    auto is_kv = [](const Token& t) { return t.text.find('=') != std::string::npos; };
    auto need_module = [&](const Token& t) {
      if (is_kv(t) || !s_.modules.count(t.text)) fail(t, "unknown module '" + t.text + "'");
    };
    auto need_map = [&](const Token& t) {
      if (is_kv(t) || !s_.maps.count(t.text)) fail(t, "unknown map '" + t.text + "'");
    };
    auto need_int = [&](const Token& t, int lo) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("int");
      } catch (const std::exception&) {
        fail(t, "expected an integer, found '" + t.text + "'");
      }
      if (v < lo) fail(t, "expected an integer >= " + std::to_string(lo));
    };
    auto kv_only = [&](std::size_t from, const std::set<std::string>& keys) {
      std::set<std::string> seen;
      for (std::size_t i = from; i < a.size(); ++i) {
        const auto eq = a[i].text.find('=');
        if (eq == std::string::npos) fail(a[i], "expected key=value");
        const std::string key = a[i].text.substr(0, eq);
        if (!keys.count(key)) fail(a[i], "unknown option '" + key + "'");
        if (!seen.insert(key).second) fail(a[i], "option '" + key + "' given twice");
      }
    };

    const std::string& n = cmd.name;
    if (n == "sthom") {
      arity(2, 2, "sthom A B");
      need_module(a[0]);
      need_module(a[1]);
    } else if (n == "cone" || n == "fiber") {
      arity(1, 1, n + " f");
      need_map(a[0]);
    } else if (n == "bracket") {
      arity(4, 4, "bracket <cc|fc|ff> f3 f2 f1");
      if (a[0].text != "cc" && a[0].text != "fc" && a[0].text != "ff") fail(a[0], "definition must be cc, fc or ff");
      for (int i = 1; i < 4; ++i) need_map(a[static_cast<std::size_t>(i)]);
    } else if (n == "nbracket") {
      std::size_t first = !a.empty() && a[0].text.front() == '[' ? 1 : 0;
      if (a.size() < first + 3) c.fail_at(head, "usage: nbracket [jseq] fn ... f1 (at least three maps)");
      for (std::size_t i = first; i < a.size(); ++i) need_map(a[i]);
      if (first) {
        std::vector<int> js;
        std::stringstream ss(a[0].text.substr(1, a[0].text.size() - 2));
        for (std::string item; std::getline(ss, item, ',');) js.push_back(std::stoi(item));
        try {
          validate_jseq(js, static_cast<int>(a.size() - first));
        } catch (const stm::Error& e) {
          fail(a[0], e.what());
        }
      }
    } else if (n == "adams") {
      if (a.size() < 3 || a.size() > 4) c.fail_at(head, "usage: adams M gen=G len=n [target=Y]");
      need_module(a[0]);
      kv_only(1, {"gen", "len", "target"});
      bool gen = false, len = false;
      for (std::size_t i = 1; i < a.size(); ++i) {
        const auto eq = a[i].text.find('=');
        const std::string key = a[i].text.substr(0, eq);
        Token val{a[i].text.substr(eq + 1), a[i].column};
        if (key == "len") {
          need_int(val, 1);
          len = true;
        } else {
          need_module(val);
          gen = gen || key == "gen";
        }
      }
      if (!gen || !len) c.fail_at(head, "usage: adams M gen=G len=n [target=Y]");
    } else if (n == "page") {
      arity(1, 1, "page r");
      need_int(a[0], 1);
      if (!have_adams_) c.fail_at(head, "'page' needs a preceding 'adams'");
    } else if (n == "dr" || n == "drforms") {
      arity(2, 4, n + " x r [s=..] [t=..]");
      need_map(a[0]);
      need_int(a[1], n == "dr" ? 1 : 2);
      kv_only(2, {"s", "t"});
      for (std::size_t i = 2; i < a.size(); ++i)
        need_int({a[i].text.substr(2), a[i].column}, a[i].text[0] == 's' ? 0 : -1000000);
      if (!have_adams_) c.fail_at(head, "'" + n + "' needs a preceding 'adams'");
    } else if (n == "heller") {
      arity(3, 3, "heller f g h");
      for (const Token& t : a) need_map(t);
    } else if (n == "sparse") {
      arity(3, 3, "sparse G N window");
      need_module(a[0]);
      need_int(a[1], 2);
      need_int(a[2], 0);
    } else if (n == "selftest") {
      arity(2, 2, "selftest heller count");
      if (a[0].text != "heller") fail(a[0], "only 'selftest heller' is available");
      need_int(a[1], 1);
    }
  }

  Session s_;
  bool have_adams_ = false;
};

}  // namespace

Session parse_session(const std::string& text) { return Parser().run(text); }

}  // namespace stmtoda
