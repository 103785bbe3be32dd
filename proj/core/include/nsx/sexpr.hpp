#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsx/error.hpp"

namespace nsx {

// Minimal S-expression layer shared by the term, formula and pipeline readers.
struct Sexpr {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;           // valid when kind == Atom
  std::vector<Sexpr> items;   // valid when kind == List
  int line = 0;
  int column = 0;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(const std::string& s) const { return is_atom() && atom == s; }
  size_t size() const { return items.size(); }
  const Sexpr& at(size_t i) const;
  // True when this is a list whose head is the given symbol.
  bool headed(const std::string& head) const;

  std::string to_string() const;
};

Sexpr parse_sexpr(const std::string& text);
// Parses a whole file: zero or more top-level expressions.
std::vector<Sexpr> parse_sexprs(const std::string& text);

Sexpr sx_atom(std::string a);
Sexpr sx_list(std::vector<Sexpr> items);

}  // namespace nsx
