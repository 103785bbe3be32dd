#include "nsx/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace nsx {

const Sexpr& Sexpr::at(size_t i) const {
  if (kind != Kind::List || i >= items.size())
    throw ParseError(line, column, "expected list element #" + std::to_string(i) + " in " + to_string());
  return items[i];
}

bool Sexpr::headed(const std::string& head) const {
  return is_list() && !items.empty() && items[0].is_atom(head);
}

std::string Sexpr::to_string() const {
  if (kind == Kind::Atom) return atom;
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) os << ' ';
    os << items[i].to_string();
  }
  os << ')';
  return os.str();
}

Sexpr sx_atom(std::string a) {
  Sexpr s;
  s.kind = Sexpr::Kind::Atom;
  s.atom = std::move(a);
  return s;
}

Sexpr sx_list(std::vector<Sexpr> items) {
  Sexpr s;
  s.kind = Sexpr::Kind::List;
  s.items = std::move(items);
  return s;
}

namespace {

struct Reader {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Reader(const std::string& t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {  // comment to end of line
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool atom_char(char c) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    return c != '(' && c != ')' && c != ';';
  }

  Sexpr read() {
    skip_ws();
    if (eof()) throw ParseError(line, col, "unexpected end of input");
    int ln = line, cl = col;
    char c = peek();
    if (c == '(') {
      advance();
      Sexpr s;
      s.kind = Sexpr::Kind::List;
      s.line = ln;
      s.column = cl;
      while (true) {
        skip_ws();
        if (eof()) throw ParseError(ln, cl, "unterminated list");
        if (peek() == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError(ln, cl, "unexpected ')'");
    if (c == '"') {
      advance();
      Sexpr s;
      s.kind = Sexpr::Kind::Atom;
      s.line = ln;
      s.column = cl;
      s.atom.push_back('"');
      while (!eof() && peek() != '"') {
        s.atom.push_back(peek());
        advance();
      }
      if (eof()) throw ParseError(ln, cl, "unterminated string");
      advance();
      s.atom.push_back('"');
      return s;
    }
    Sexpr s;
    s.kind = Sexpr::Kind::Atom;
    s.line = ln;
    s.column = cl;
    while (!eof() && atom_char(peek())) {
      s.atom.push_back(peek());
      advance();
    }
    return s;
  }
};

}  // namespace

Sexpr parse_sexpr(const std::string& text) {
  Reader r(text);
  Sexpr s = r.read();
  r.skip_ws();
  if (!r.eof()) throw ParseError(r.line, r.col, "trailing input after expression");
  return s;
}

std::vector<Sexpr> parse_sexprs(const std::string& text) {
  Reader r(text);
  std::vector<Sexpr> out;
  r.skip_ws();
  while (!r.eof()) {
    out.push_back(r.read());
    r.skip_ws();
  }
  return out;
}

}  // namespace nsx
