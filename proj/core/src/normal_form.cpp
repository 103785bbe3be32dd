#include "nsx/normal_form.hpp"

#include "nsx/error.hpp"

namespace nsx {

Formula NormalForm::to_formula() const {
  return Formula::forall_st_block(uVars, Formula::exists_st_block(eVars, matrix));
}

void NormalForm::validate() const {
  if (!is_internal(matrix)) throw ShapeError("normal-form matrix is not internal: " + matrix.to_string());
  for (const auto& u : uVars)
    for (const auto& e : eVars)
      if (u.name == e.name) throw ShapeError("blocks share the variable " + u.name);
}

std::optional<NormalForm> recognize(const Formula& f, NotNormal* why) {
  NormalForm nf;
  Formula rest = f;
  while (rest.kind() == Formula::Kind::ForallSt) {
    nf.uVars.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  while (rest.kind() == Formula::Kind::ExistsSt) {
    nf.eVars.push_back({rest.qvar(), rest.qtype()});
    rest = rest.body();
  }
  if (rest.kind() == Formula::Kind::ForallSt) {
    if (why) why->reason = "existential before universal";
    return std::nullopt;
  }
  if (!is_internal(rest)) {
    if (why) {
      why->reason = rest.kind() == Formula::Kind::ExistsSt
                        ? "existential before universal"
                        : "matrix is not internal";
    }
    return std::nullopt;
  }
  nf.matrix = rest;
  return nf;
}

}  // namespace nsx
