#include "nsx/types.hpp"

#include "nsx/error.hpp"

namespace nsx {

struct FinType::Node {
  Kind kind;
  std::vector<FinType> kids;
};

namespace {
const std::shared_ptr<const FinType::Node>& base_node() {
  static const auto n = std::make_shared<const FinType::Node>(
      FinType::Node{FinType::Kind::Base, {}});
  return n;
}
}  // namespace

FinType::FinType() : node_(base_node()) {}

FinType FinType::base() { return FinType(base_node()); }

FinType FinType::arrow(FinType dom, FinType cod) {
  return FinType(std::make_shared<const Node>(Node{Kind::Arrow, {std::move(dom), std::move(cod)}}));
}

FinType FinType::seq(FinType elem) {
  return FinType(std::make_shared<const Node>(Node{Kind::Seq, {std::move(elem)}}));
}

FinType FinType::arrows(const std::vector<FinType>& args, FinType cod) {
  FinType t = std::move(cod);
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = arrow(*it, t);
  return t;
}

FinType::Kind FinType::kind() const { return node_->kind; }

const FinType& FinType::dom() const { return node_->kids[0]; }
const FinType& FinType::cod() const { return node_->kids[1]; }
const FinType& FinType::elem() const { return node_->kids[0]; }

bool FinType::operator==(const FinType& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  if (node_->kids.size() != o.node_->kids.size()) return false;
  for (size_t i = 0; i < node_->kids.size(); ++i)
    if (!(node_->kids[i] == o.node_->kids[i])) return false;
  return true;
}

std::string FinType::to_string() const { return to_sexpr().to_string(); }

Sexpr FinType::to_sexpr() const {
  switch (kind()) {
    case Kind::Base:
      return sx_atom("N");
    case Kind::Arrow:
      return sx_list({sx_atom("->"), dom().to_sexpr(), cod().to_sexpr()});
    case Kind::Seq:
      return sx_list({sx_atom("*"), elem().to_sexpr()});
  }
  throw Error("unreachable type kind");
}

FinType FinType::from_sexpr(const Sexpr& s) {
  if (s.is_atom("N")) return base();
  // "R" is accepted as input sugar for the type-1 representation of reals;
  // it always prints back in the canonical (-> N N) form.
  if (s.is_atom("R")) return arrow(base(), base());
  if (s.headed("->") && s.size() == 3) return arrow(from_sexpr(s.at(1)), from_sexpr(s.at(2)));
  if (s.headed("*") && s.size() == 2) return seq(from_sexpr(s.at(1)));
  throw ParseError(s.line, s.column, "expected a type, got " + s.to_string());
}

FinType FinType::parse(const std::string& text) { return from_sexpr(parse_sexpr(text)); }

}  // namespace nsx
