#include "nsx/definitions.hpp"

#include "nsx/error.hpp"

namespace nsx {

namespace {

const FinType N = FinType::base();
const FinType R = Formula::real_sort();        // type-1 representation of reals
const FinType NN = FinType::arrow(FinType::base(), FinType::base());
const FinType PART = FinType::seq(Formula::real_sort());  // partitions as sequences of reals
const FinType RSEQ = FinType::arrow(FinType::base(), Formula::real_sort());
const FinType Y2 = FinType::arrow(FinType::arrow(FinType::base(), FinType::base()), FinType::base());

Term v(const std::string& n, FinType t) { return Term::var(n, t); }
Term vn(const std::string& n) { return Term::var(n, N); }

Formula atom(const std::string& name, std::vector<Term> args) {
  return Formula::atom_pred(name, std::move(args));
}

std::vector<DefinitionEntry> build_registry() {
  std::vector<DefinitionEntry> reg;

  // --- nonstandard continuity on the real line -----------------------------
  {
    DefinitionEntry d;
    d.name = "ns-continuity";
    d.params = {{"f", FinType::arrow(R, R)}};
    d.nonstandard = true;
    d.figureDefinition = true;
    d.citation = "nonstandard continuity; Robinson 1966, Nelson BAMS 83 (1977) sec. 5";
    Term f = v("f", FinType::arrow(R, R));
    Term x = v("x", R), y = v("y", R);
    d.expansion = Formula::forall_st(
        "x", R,
        Formula::forall("y", R,
                        Formula::implies(approx(x, y, "N"),
                                         approx(Term::app(f, x), Term::app(f, y), "k"))));
    d.normalForm.uVars = {{"x", R}, {"k", N}};
    d.normalForm.eVars = {{"M", N}};
    d.normalForm.matrix = Formula::forall(
        "y", R,
        Formula::implies(atom("dlt", {x, y, vn("M")}),
                         atom("dlt", {Term::app(f, x), Term::app(f, y), vn("k")})));
    reg.push_back(std::move(d));
  }

  // --- nonstandard uniform continuity on [0,1] -----------------------------
  {
    DefinitionEntry d;
    d.name = "ns-uniform-continuity";
    d.params = {{"f", FinType::arrow(R, R)}};
    d.nonstandard = true;
    d.figureDefinition = true;
    d.citation = "nonstandard uniform continuity on the unit interval; infinitesimal calculus folklore";
    Term f = v("f", FinType::arrow(R, R));
    Term x = v("x", R), y = v("y", R);
    Formula dom = Formula::conj(atom("in01", {x}), atom("in01", {y}));
    d.expansion = Formula::forall(
        "x", R,
        Formula::forall(
            "y", R,
            Formula::implies(dom, Formula::implies(approx(x, y, "N"),
                                                   approx(Term::app(f, x), Term::app(f, y), "k")))));
    d.normalForm.uVars = {{"k", N}};
    d.normalForm.eVars = {{"M", N}};
    d.normalForm.matrix = Formula::forall(
        "x", R,
        Formula::forall(
            "y", R,
            Formula::implies(
                dom, Formula::implies(atom("dlt", {x, y, vn("M")}),
                                      atom("dlt", {Term::app(f, x), Term::app(f, y), vn("k")})))));
    reg.push_back(std::move(d));
  }

  // --- nonstandard Riemann integrability on [0,1] --------------------------
  {
    DefinitionEntry d;
    d.name = "ns-integrability";
    d.params = {{"f", FinType::arrow(R, R)}};
    d.nonstandard = true;
    d.figureDefinition = true;
    d.citation = "nonstandard integrability: Riemann sums agree on partitions of infinitesimal mesh";
    Term f = v("f", FinType::arrow(R, R));
    Term p = v("p", PART), q = v("q", PART);
    Formula dom = Formula::conj(atom("inpart", {p}), atom("inpart", {q}));
    auto mesh0 = [&](const Term& part, const std::string& idx) {
      return Formula::forall_st(idx, N, atom("meshlt", {part, vn(idx)}));
    };
    Formula sums = Formula::forall_st("k", N, atom("sumdlt", {f, p, q, vn("k")}));
    d.expansion = Formula::forall(
        "p", PART,
        Formula::forall(
            "q", PART,
            Formula::implies(dom, Formula::implies(Formula::conj(mesh0(p, "N"), mesh0(q, "N2")),
                                                   sums))));
    d.normalForm.uVars = {{"k", N}};
    d.normalForm.eVars = {{"M", N}};
    d.normalForm.matrix = Formula::forall(
        "p", PART,
        Formula::forall(
            "q", PART,
            Formula::implies(
                dom,
                Formula::implies(
                    Formula::conj(atom("meshlt", {p, vn("M")}), atom("meshlt", {q, vn("M")})),
                    atom("sumdlt", {f, p, q, vn("k")})))));
    reg.push_back(std::move(d));
  }

  // --- nonstandard convergence of a monotone [0,1] sequence ----------------
  {
    DefinitionEntry d;
    d.name = "ns-convergence";
    d.params = {{"x", RSEQ}};
    d.nonstandard = true;
    d.figureDefinition = true;
    d.citation = "nonstandard convergence: terms at infinite indices are infinitely close";
    Term x = v("x", RSEQ);
    Formula mono = Formula::forall("n", N, atom("mono01", {x, vn("n")}));
    Formula close = Formula::forall_st("k", N, atom("sdle", {x, vn("I"), vn("J"), vn("k")}));
    d.expansion = Formula::implies(
        mono, Formula::forall(
                  "I", N,
                  Formula::forall(
                      "J", N,
                      Formula::implies(Formula::conj(Formula::negate(Formula::st(vn("I"))),
                                                     Formula::negate(Formula::st(vn("J")))),
                                       close))));
    d.normalForm.uVars = {{"k", N}};
    d.normalForm.eVars = {{"m", N}};
    d.normalForm.matrix = Formula::implies(
        mono,
        Formula::forall(
            "I", N,
            Formula::implies(
                Formula::atom_le0(vn("m"), vn("I")),
                Formula::forall("J", N,
                                Formula::implies(Formula::atom_le0(vn("m"), vn("J")),
                                                 atom("sdle", {x, vn("I"), vn("J"), vn("k")}))))));
    reg.push_back(std::move(d));
  }

  // --- nonstandard differentiability at a point -----------------------------
  {
    DefinitionEntry d;
    d.name = "ns-differentiability";
    d.params = {{"f", FinType::arrow(R, R)}, {"a", R}};
    d.nonstandard = true;
    d.figureDefinition = true;
    d.citation = "nonstandard differentiability: difference quotients at infinitesimal increments agree";
    Term f = v("f", FinType::arrow(R, R));
    Term a = v("a", R);
    Term e1 = v("e", R), e2 = v("e'", R);
    Formula nzs = Formula::conj(atom("nz", {e1}), atom("nz", {e2}));
    Formula inf = Formula::conj(approx_zero(e1, "N"), approx_zero(e2, "N2"));
    Formula quot = Formula::forall_st("k", N, atom("ddlt", {f, a, e1, e2, vn("k")}));
    d.expansion = Formula::forall(
        "e", R,
        Formula::forall("e'", R,
                        Formula::implies(nzs, Formula::implies(inf, quot))));
    d.normalForm.uVars = {{"k", N}};
    d.normalForm.eVars = {{"M", N}};
    d.normalForm.matrix = Formula::forall(
        "e", R,
        Formula::forall(
            "e'", R,
            Formula::implies(
                nzs, Formula::implies(Formula::conj(atom("alt", {e1, vn("M")}),
                                                    atom("alt", {e2, vn("M")})),
                                      atom("ddlt", {f, a, e1, e2, vn("k")})))));
    reg.push_back(std::move(d));
  }

  // --- Transfer limited to universal number quantifiers --------------------
  {
    DefinitionEntry d;
    d.name = "Pi01-TRANS";
    d.params = {};
    d.nonstandard = true;
    d.citation = "Transfer restricted to Pi^0_1 formulas; van den Berg-Briseid-Safarik APAL 163 (2012)";
    Term g = v("g", NN);
    d.expansion = Formula::forall_st(
        "g", NN,
        Formula::implies(
            Formula::forall_st("n", N,
                               Formula::negate(Formula::atom_eq0(Term::app(g, vn("n")), Term::zero()))),
            Formula::forall("m", N,
                            Formula::negate(Formula::atom_eq0(Term::app(g, vn("m")), Term::zero())))));
    d.normalForm.uVars = {{"g", NN}};
    d.normalForm.eVars = {{"m", N}};
    d.normalForm.matrix = Formula::implies(
        Formula::exists("n", N, Formula::atom_eq0(Term::app(g, vn("n")), Term::zero())),
        Formula::exists("i", N,
                        Formula::conj(Formula::atom_le0(vn("i"), vn("m")),
                                      Formula::atom_eq0(Term::app(g, vn("i")), Term::zero()))));
    reg.push_back(std::move(d));
  }

  // --- Feferman's mu operator (functional counterpart) ----------------------
  {
    DefinitionEntry d;
    d.name = "MU";
    d.params = {{"mu", FinType::arrow(NN, N)}};
    d.nonstandard = false;
    d.citation = "Feferman's non-constructive mu operator; Avigad-Feferman, Handbook of Proof Theory";
    Term mu = v("mu", FinType::arrow(NN, N));
    Term g = v("g", NN);
    d.expansion = Formula::forall(
        "g", NN,
        Formula::implies(
            Formula::exists("n", N, Formula::atom_eq0(Term::app(g, vn("n")), Term::zero())),
            Formula::atom_eq0(Term::app(g, Term::app(mu, g)), Term::zero())));
    d.normalForm.matrix = d.expansion;
    reg.push_back(std::move(d));
  }

  // --- Standard Part for Cantor space ---------------------------------------
  {
    DefinitionEntry d;
    d.name = "STP";
    d.params = {};
    d.nonstandard = true;
    d.citation = "Standard Part on Cantor space; nonstandard counterpart of weak Koenig's lemma";
    Term a = v("a", NN), b = v("b", NN);
    d.expansion = Formula::forall(
        "a", NN,
        Formula::implies(atom("bin", {a}),
                         Formula::exists_st(
                             "b", NN,
                             Formula::conj(atom("bin", {b}),
                                           Formula::forall_st("n", N, atom("agree", {a, b, vn("n")}))))));
    Term g = v("g", Y2);
    Term cands = v("w", FinType::seq(NN));
    Term T = v("T", NN), be = v("be", NN);
    d.normalForm.uVars = {{"g", Y2}};
    d.normalForm.eVars = {{"w", FinType::seq(NN)}, {"b0", N}};
    d.normalForm.matrix = Formula::forall(
        "T", NN,
        Formula::implies(
            atom("bintree", {T}),
            Formula::implies(
                forall_in("al", NN, cands,
                          atom("notin", {T, v("al", NN), Term::app(g, v("al", NN))})),
                Formula::forall(
                    "be", NN,
                    Formula::implies(
                        atom("bin", {be}),
                        Formula::exists(
                            "i", N,
                            Formula::conj(Formula::atom_le0(vn("i"), vn("b0")),
                                          atom("notin", {T, be, vn("i")}))))))));
    reg.push_back(std::move(d));
  }

  // --- special fan functional (functional counterpart of STP) ---------------
  {
    DefinitionEntry d;
    d.name = "SCF";
    d.params = {{"thb", FinType::arrow(Y2, N)}, {"thc", FinType::arrow(Y2, FinType::seq(NN))}};
    d.nonstandard = false;
    d.citation = "special fan functional: a bound and a finite candidate cover of Cantor space";
    Term thb = v("thb", FinType::arrow(Y2, N));
    Term thc = v("thc", FinType::arrow(Y2, FinType::seq(NN)));
    Term g = v("g", Y2);
    Term T = v("T", NN), be = v("be", NN);
    d.expansion = Formula::forall(
        "g", Y2,
        Formula::forall(
            "T", NN,
            Formula::implies(
                atom("bintree", {T}),
                Formula::implies(
                    forall_in("al", NN, Term::app(thc, g),
                              atom("notin", {T, v("al", NN), Term::app(g, v("al", NN))})),
                    Formula::forall(
                        "be", NN,
                        Formula::implies(
                            atom("bin", {be}),
                            Formula::exists(
                                "i", N,
                                Formula::conj(Formula::atom_le0(vn("i"), Term::app(thb, g)),
                                              atom("notin", {T, be, vn("i")})))))))));
    d.normalForm.matrix = d.expansion;
    reg.push_back(std::move(d));
  }

  // --- intuitionistic fan functional ----------------------------------------
  {
    DefinitionEntry d;
    d.name = "MUC";
    d.params = {{"om", FinType::arrow(Y2, N)}};
    d.nonstandard = false;
    d.citation = "intuitionistic fan functional: a modulus of uniform continuity on Cantor space; Kohlenbach, higher-order RM";
    Term om = v("om", FinType::arrow(Y2, N));
    Term Y = v("Y", Y2);
    Term a = v("a", NN), b = v("b", NN);
    Formula bins = Formula::conj(atom("bin", {a}), atom("bin", {b}));
    d.expansion = Formula::forall(
        "Y", Y2,
        Formula::forall(
            "a", NN,
            Formula::forall(
                "b", NN,
                Formula::implies(
                    bins, Formula::implies(atom("agree", {a, b, Term::app(om, Y)}),
                                           Formula::atom_eq0(Term::app(Y, a), Term::app(Y, b)))))));
    d.normalForm.uVars = {{"Y", Y2}};
    d.normalForm.eVars = {{"M", N}};
    d.normalForm.matrix = Formula::forall(
        "a", NN,
        Formula::forall(
            "b", NN,
            Formula::implies(bins,
                             Formula::implies(atom("agree", {a, b, vn("M")}),
                                              Formula::atom_eq0(Term::app(Y, a), Term::app(Y, b))))));
    reg.push_back(std::move(d));
  }

  for (auto& d : reg) d.normalForm.validate();
  return reg;
}

}  // namespace

const std::string& registry_version() {
  static const std::string v = "1";
  return v;
}

const std::vector<DefinitionEntry>& definition_registry() {
  static const std::vector<DefinitionEntry> reg = build_registry();
  return reg;
}

const DefinitionEntry& lookup_definition(const std::string& name) {
  for (const auto& d : definition_registry())
    if (d.name == name) return d;
  throw UnknownDefinition(name);
}

namespace {

// Hygienic template instantiation: freshens any bound variable that would
// capture a free variable of the arguments, then substitutes parameters.
Formula instantiate(const Formula& tmpl, const std::vector<TypedVar>& params,
                    const std::vector<Term>& args) {
  if (params.size() != args.size())
    throw ShapeError("definition expects " + std::to_string(params.size()) + " arguments, got " +
                     std::to_string(args.size()));
  Formula out = tmpl;
  for (size_t i = 0; i < params.size(); ++i) out = subst_term(out, params[i].name, args[i]);
  return out;
}

}  // namespace

Formula expand_definition(const std::string& name, const std::vector<Term>& args) {
  const DefinitionEntry& d = lookup_definition(name);
  return instantiate(d.expansion, d.params, args);
}

NormalForm definition_normal_form(const std::string& name, const std::vector<Term>& args) {
  const DefinitionEntry& d = lookup_definition(name);
  if (d.params.size() != args.size())
    throw ShapeError("definition expects " + std::to_string(d.params.size()) + " arguments");

  NormalForm nf = d.normalForm;
  // Freshen block variables away from argument free variables.
  std::set<std::string> avoid;
  for (const Term& a : args) {
    auto fv = a.free_vars();
    avoid.insert(fv.begin(), fv.end());
  }
  auto freshen_block = [&](std::vector<TypedVar>& block) {
    for (auto& tv : block) {
      if (avoid.count(tv.name)) {
        std::string nn = fresh_name(tv.name, avoid);
        nf.matrix = subst_term(nf.matrix, tv.name, Term::var(nn, tv.type));
        tv.name = nn;
      }
      avoid.insert(tv.name);
    }
  };
  freshen_block(nf.uVars);
  freshen_block(nf.eVars);
  for (size_t i = 0; i < d.params.size(); ++i)
    nf.matrix = subst_term(nf.matrix, d.params[i].name, args[i]);
  return nf;
}

}  // namespace nsx
