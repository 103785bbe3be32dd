#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsx/sexpr.hpp"

namespace nsx {

// Finite types: the base type of naturals, arrow types, and a dedicated
// finite-sequence constructor.  Seq(t) is a constructor of its own, distinct
// from Arrow(Base, t).
class FinType {
 public:
  enum class Kind { Base, Arrow, Seq };

  FinType();  // Base

  static FinType base();
  static FinType arrow(FinType dom, FinType cod);
  static FinType seq(FinType elem);
  // Curried arrow over several arguments: args -> cod.
  static FinType arrows(const std::vector<FinType>& args, FinType cod);

  Kind kind() const;
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_seq() const { return kind() == Kind::Seq; }

  const FinType& dom() const;   // arrow only
  const FinType& cod() const;   // arrow only
  const FinType& elem() const;  // seq only

  bool operator==(const FinType& o) const;
  bool operator!=(const FinType& o) const { return !(*this == o); }

  std::string to_string() const;
  Sexpr to_sexpr() const;
  static FinType from_sexpr(const Sexpr& s);
  static FinType parse(const std::string& text);

 public:
  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  explicit FinType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

}  // namespace nsx
