#include "nsx/oracles.hpp"

#include <algorithm>
#include <set>

#include "nsx/error.hpp"

namespace nsx {

// ---------------------------------------------------------------------------
// RatValue

RatValue RatValue::of(uint64_t n) {
  RatValue v;
  v.kind = Kind::Nat;
  v.nat = n;
  return v;
}
RatValue RatValue::of(Rational q) {
  RatValue v;
  v.kind = Kind::Rat;
  v.rat = q;
  return v;
}
RatValue RatValue::of(Partition p) {
  RatValue v;
  v.kind = Kind::Part;
  v.part = std::move(p);
  return v;
}
RatValue RatValue::of_fn(std::function<RatValue(const RatValue&)> f) {
  RatValue v;
  v.kind = Kind::Fn;
  v.fn = std::move(f);
  return v;
}
RatValue RatValue::of_realfn(const RealFn& f) {
  return of_fn([f](const RatValue& x) { return RatValue::of(f(x.as_rat())); });
}
RatValue RatValue::of_natfn(std::function<uint64_t(uint64_t)> f) {
  return of_fn([f](const RatValue& x) { return RatValue::of(f(x.as_nat())); });
}
RatValue RatValue::seq(std::vector<RatValue> xs) {
  RatValue v;
  v.kind = Kind::Seq;
  v.items = std::move(xs);
  return v;
}

Rational RatValue::as_rat() const {
  if (kind == Kind::Rat) return rat;
  if (kind == Kind::Nat) return Rational(static_cast<int64_t>(nat));
  throw Unrepresentable("expected a rational value");
}

uint64_t RatValue::as_nat() const {
  if (kind == Kind::Nat) return nat;
  if (kind == Kind::Rat && rat.den() == 1 && rat.num() >= 0)
    return static_cast<uint64_t>(rat.num());
  throw Unrepresentable("expected a natural value");
}

std::string RatValue::to_string() const {
  switch (kind) {
    case Kind::Nat:
      return std::to_string(nat);
    case Kind::Rat:
      return rat.to_string();
    case Kind::Fn:
      return "<fn>";
    case Kind::Part:
      return part.to_string();
    case Kind::Seq: {
      std::string s = "<";
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) s += " ";
        s += items[i].to_string();
      }
      return s + ">";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Contract evaluation

namespace {

using PtrEnv = std::map<std::string, const RatValue*>;

RatValue eval_rat_term(const Term& t, const PtrEnv& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = env.find(t.var_name());
      if (it == env.end()) throw Unrepresentable("unbound contract variable " + t.var_name());
      return *it->second;
    }
    case Term::Kind::Zero:
      return RatValue::of(uint64_t(0));
    case Term::Kind::NumLit:
      return RatValue::of(t.num_value());
    case Term::Kind::Succ: {
      return RatValue::of(eval_rat_term(t.arg(), env).as_nat() + 1);
    }
    case Term::Kind::App: {
      RatValue f = eval_rat_term(t.fn(), env);
      if (f.kind != RatValue::Kind::Fn) throw Unrepresentable("application of a non-function");
      return f.fn(eval_rat_term(t.arg(), env));
    }
    case Term::Kind::SeqLen: {
      RatValue s = eval_rat_term(t.arg(), env);
      if (s.kind != RatValue::Kind::Seq) throw Unrepresentable("len of a non-sequence");
      return RatValue::of(static_cast<uint64_t>(s.items.size()));
    }
    case Term::Kind::SeqIdx: {
      RatValue s = eval_rat_term(t.lhs(), env);
      uint64_t i = eval_rat_term(t.rhs(), env).as_nat();
      if (s.kind != RatValue::Kind::Seq || i >= s.items.size())
        throw Unrepresentable("bad sequence index");
      return s.items[i];
    }
    default:
      throw Unrepresentable("term form outside the contract language: " + t.to_string());
  }
}

Rational inv_or_huge(uint64_t n) {
  // 1/0 acts as an infinite tolerance.
  if (n == 0) return Rational(INT64_MAX / 2);
  return Rational(1, static_cast<int64_t>(n));
}

bool atom_truth(const std::string& name, const std::vector<RatValue>& a,
                const EvalBounds& bounds) {
  (void)bounds;
  if (name == "dlt" && a.size() == 3)
    return (a[0].as_rat() - a[1].as_rat()).abs() < inv_or_huge(a[2].as_nat());
  if (name == "dle" && a.size() == 3)
    return (a[0].as_rat() - a[1].as_rat()).abs() <= inv_or_huge(a[2].as_nat());
  if (name == "alt" && a.size() == 2) return a[0].as_rat().abs() < inv_or_huge(a[1].as_nat());
  if (name == "ale" && a.size() == 2) return a[0].as_rat().abs() <= inv_or_huge(a[1].as_nat());
  if (name == "nz" && a.size() == 1) return !a[0].as_rat().is_zero();
  if (name == "in01" && a.size() == 1) {
    Rational x = a[0].as_rat();
    return Rational(0) <= x && x <= Rational(1);
  }
  if (name == "inpart" && a.size() == 1) {
    if (a[0].kind != RatValue::Kind::Part) return false;
    try {
      a[0].part.validate();
      return true;
    } catch (const NotPartition&) {
      return false;
    }
  }
  if (name == "meshlt" && a.size() == 2) {
    if (a[0].kind != RatValue::Kind::Part) throw Unrepresentable("meshlt on non-partition");
    return a[0].part.mesh() < inv_or_huge(a[1].as_nat());
  }
  if ((name == "sumdlt" || name == "sumdle") && a.size() == 4) {
    if (a[0].kind != RatValue::Kind::Fn) throw Unrepresentable("sum distance needs a function");
    if (a[1].kind != RatValue::Kind::Part || a[2].kind != RatValue::Kind::Part)
      throw Unrepresentable("sum distance needs partitions");
    // Riemann sums through the function value at each tag.
    auto sum = [&](const Partition& p) {
      Rational s(0);
      for (size_t i = 0; i < p.tags.size(); ++i)
        s += a[0].fn(RatValue::of(p.tags[i])).as_rat() * (p.points[i + 1] - p.points[i]);
      return s;
    };
    Rational d = (sum(a[1].part) - sum(a[2].part)).abs();
    Rational tol = inv_or_huge(a[3].as_nat());
    return name == "sumdlt" ? d < tol : d <= tol;
  }
  if (name == "mono01" && a.size() == 2) {
    if (a[0].kind != RatValue::Kind::Fn) throw Unrepresentable("mono01 needs a sequence");
    uint64_t n = a[1].as_nat();
    Rational xn = a[0].fn(RatValue::of(n)).as_rat();
    Rational xn1 = a[0].fn(RatValue::of(n + 1)).as_rat();
    return Rational(0) <= xn && xn <= xn1 && xn1 <= Rational(1);
  }
  if (name == "sdle" && a.size() == 4) {
    if (a[0].kind != RatValue::Kind::Fn) throw Unrepresentable("sdle needs a sequence");
    Rational xn = a[0].fn(RatValue::of(a[1].as_nat())).as_rat();
    Rational xm = a[0].fn(RatValue::of(a[2].as_nat())).as_rat();
    return (xn - xm).abs() <= inv_or_huge(a[3].as_nat());
  }
  if (name == "ddlt" && a.size() == 5) {
    if (a[0].kind != RatValue::Kind::Fn) throw Unrepresentable("ddlt needs a function");
    Rational at = a[1].as_rat(), e1 = a[2].as_rat(), e2 = a[3].as_rat();
    if (e1.is_zero() || e2.is_zero()) return true;  // guarded by nz in contracts
    auto fv = [&](const Rational& x) { return a[0].fn(RatValue::of(x)).as_rat(); };
    Rational q1 = (fv(at + e1) - fv(at)) / e1;
    Rational q2 = (fv(at + e2) - fv(at)) / e2;
    return (q1 - q2).abs() < inv_or_huge(a[4].as_nat());
  }
  if (name == "eq" && a.size() == 2) {
    if (a[0].kind == RatValue::Kind::Nat && a[1].kind == RatValue::Kind::Nat)
      return a[0].nat == a[1].nat;
    return a[0].as_rat() == a[1].as_rat();
  }
  if (name == "in" && a.size() == 2) {
    if (a[1].kind != RatValue::Kind::Seq) throw Unrepresentable("in needs a sequence");
    for (const auto& e : a[1].items) {
      if (e.kind == RatValue::Kind::Nat && a[0].kind == RatValue::Kind::Nat) {
        if (e.nat == a[0].nat) return true;
      } else if (e.as_rat() == a[0].as_rat()) {
        return true;
      }
    }
    return false;
  }
  throw Unrepresentable("atom " + name + " has no rational semantics");
}

// Quantifier domain at the oracle layer, selected by sort.
std::vector<RatValue> rat_domain(const FinType& type, const EvalBounds& bounds) {
  if (type.is_base()) {
    std::vector<RatValue> out;
    for (int n = 0; n <= bounds.natBound; ++n) out.push_back(RatValue::of(uint64_t(n)));
    return out;
  }
  if (type == Formula::real_sort()) {
    std::vector<RatValue> out;
    for (int j = 0; j <= bounds.denomBound; ++j)
      out.push_back(RatValue::of(Rational(j, bounds.denomBound)));
    return out;
  }
  if (type == FinType::seq(Formula::real_sort())) {
    std::vector<RatValue> out;
    for (const auto& p : bounds.partitions) out.push_back(RatValue::of(p));
    return out;
  }
  throw Unrepresentable("no oracle domain for quantifier sort " + type.to_string());
}

}  // namespace

namespace {

struct EvalCtx {
  const EvalBounds& bounds;
  std::map<std::string, std::vector<RatValue>> domains;

  const std::vector<RatValue>& domain(const FinType& type) {
    std::string key = type.to_string();
    auto it = domains.find(key);
    if (it != domains.end()) return it->second;
    return domains.emplace(key, rat_domain(type, bounds)).first->second;
  }
};

bool eval_contract_rec(const Formula& f, PtrEnv& env, EvalCtx& ctx) {
  switch (f.kind()) {
    case Formula::Kind::AtomEq0: {
      RatValue a = eval_rat_term(f.term_lhs(), env);
      RatValue b = eval_rat_term(f.term_rhs(), env);
      return a.as_rat() == b.as_rat();
    }
    case Formula::Kind::AtomLe0:
      return eval_rat_term(f.term_lhs(), env).as_rat() <=
             eval_rat_term(f.term_rhs(), env).as_rat();
    case Formula::Kind::AtomPred: {
      std::vector<RatValue> args;
      for (const Term& t : f.pred_args()) args.push_back(eval_rat_term(t, env));
      return atom_truth(f.pred_name(), args, ctx.bounds);
    }
    case Formula::Kind::Not:
      return !eval_contract_rec(f.child(), env, ctx);
    case Formula::Kind::And:
      return eval_contract_rec(f.lhs(), env, ctx) && eval_contract_rec(f.rhs(), env, ctx);
    case Formula::Kind::Or:
      return eval_contract_rec(f.lhs(), env, ctx) || eval_contract_rec(f.rhs(), env, ctx);
    case Formula::Kind::Implies:
      return !eval_contract_rec(f.lhs(), env, ctx) || eval_contract_rec(f.rhs(), env, ctx);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool universal = f.kind() == Formula::Kind::Forall;
      const std::string* var = nullptr;
      const Formula* body = nullptr;
      std::vector<RatValue> boundedDomain;
      const std::vector<RatValue>* dom = nullptr;

      if (universal && is_bounded_number_forall(f)) {
        uint64_t bound = eval_rat_term(f.body().lhs().term_rhs(), env).as_nat();
        for (uint64_t i = 0; i <= bound; ++i) boundedDomain.push_back(RatValue::of(i));
        var = &f.qvar();
        body = &f.body().rhs();
        dom = &boundedDomain;
      } else if (!universal && is_bounded_number_exists(f)) {
        uint64_t bound = eval_rat_term(f.body().lhs().term_rhs(), env).as_nat();
        for (uint64_t i = 0; i <= bound; ++i) boundedDomain.push_back(RatValue::of(i));
        var = &f.qvar();
        body = &f.body().rhs();
        dom = &boundedDomain;
      } else if (auto mq = match_member_quant(f); mq && mq->universal == universal) {
        RatValue range = eval_rat_term(mq->range, env);
        if (range.kind != RatValue::Kind::Seq) throw Unrepresentable("member range");
        boundedDomain = range.items;
        const RatValue* old = nullptr;
        auto saved = env.find(mq->var);
        if (saved != env.end()) old = saved->second;
        for (const auto& v : boundedDomain) {
          env[mq->var] = &v;
          bool r = eval_contract_rec(mq->body, env, ctx);
          if (universal ? !r : r) {
            if (old) env[mq->var] = old; else env.erase(mq->var);
            return !universal;
          }
        }
        if (old) env[mq->var] = old; else env.erase(mq->var);
        return universal;
      } else {
        var = &f.qvar();
        body = &f.body();
        dom = &ctx.domain(f.qtype());
      }

      const RatValue* old = nullptr;
      auto saved = env.find(*var);
      if (saved != env.end()) old = saved->second;
      bool result = universal;
      for (const auto& v : *dom) {
        env[*var] = &v;
        bool r = eval_contract_rec(*body, env, ctx);
        if (universal ? !r : r) {
          result = !universal;
          break;
        }
      }
      if (old) env[*var] = old; else env.erase(*var);
      return result;
    }
    default:
      throw Unrepresentable("contract evaluation of " + f.to_string());
  }
}

}  // namespace

bool eval_contract(const Formula& f, const RatEnv& env, const EvalBounds& bounds) {
  PtrEnv ptrs;
  for (const auto& [name, value] : env) ptrs[name] = &value;
  EvalCtx ctx{bounds, {}};
  return eval_contract_rec(f, ptrs, ctx);
}

// ---------------------------------------------------------------------------
// Witness verification

VerificationReport verify_witness(const ExtractionResult& r, const std::vector<DomainPoint>& domain,
                                  const EvalBounds& bounds) {
  VerificationReport report;
  for (const auto& point : domain) {
    ++report.checked;
    try {
      Term applied = r.witness;
      for (const Term& a : point.termArgs) applied = Term::app(applied, a);
      Term value = eval(applied, bounds.fuel);
      if (value.kind() != Term::Kind::SeqLit)
        throw IllTyped("witness did not produce a candidate sequence");

      bool found = false;
      std::string lastDetail = "empty candidate list";
      std::vector<RatValue> cands;
      if (r.decode == CandidateDecode::Nat) {
        for (const Term& cand : value.seq_elements()) {
          auto n = cand.as_numeral();
          if (!n) throw IllTyped("candidate is not a numeral");
          cands.push_back(RatValue::of(*n));
        }
      } else {
        for (const Rational& q : decode_candidates(value, r.decode))
          cands.push_back(RatValue::of(q));
      }
      for (const RatValue& cv : cands) {
        RatEnv env = point.bindings;
        env[r.candidate.name] = cv;
        if (eval_contract(r.matrix, env, bounds)) {
          found = true;
          break;
        }
        lastDetail = "candidate " + cv.to_string() + " fails the matrix";
      }
      if (!found) {
        report.ok = false;
        report.failures.push_back({point.label, lastDetail});
      }
    } catch (const FuelExhausted& e) {
      report.ok = false;
      report.failures.push_back({point.label, e.what()});
    } catch (const Error& e) {
      report.ok = false;
      report.failures.push_back({point.label, e.what()});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Bounded search

std::optional<uint64_t> mu_bounded(const std::vector<uint64_t>& f, uint64_t B) {
  for (uint64_t n = 0; n <= B && n < f.size(); ++n)
    if (f[n] == 0) return n;
  return std::nullopt;
}

namespace {

std::optional<uint64_t> first_zero(const std::vector<uint64_t>& f) {
  for (uint64_t n = 0; n < f.size(); ++n)
    if (f[n] == 0) return n;
  return std::nullopt;
}

bool zero_by(const std::vector<uint64_t>& f, uint64_t n) {
  auto p = first_zero(f);
  return p && *p <= n;
}

}  // namespace

bool leuk_close(const std::vector<uint64_t>& f, uint64_t n, uint64_t m, uint64_t k) {
  if (k == 0) return true;
  if (n > m) std::swap(n, m);
  bool zn = zero_by(f, n), zm = zero_by(f, m);
  // x_i = 0 before the first zero, 1 - 2^-i afterwards.
  if (!zn && !zm) return true;  // both zero
  if (!zn && zm) {
    // |x_m - 0| = 1 - 2^-m
    if (m == 0) return true;
    if (k == 1) return true;  // 1 - 2^-m <= 1
    if (m > 62) return false; // essentially 1 > 1/k for k >= 2
    return Rational(1) - Rational::pow2_inv(static_cast<int>(m)) <= Rational::inv(k);
  }
  // both past the jump: |x_n - x_m| = 2^-n - 2^-m < 2^-n
  if (n > 62) return true;  // below any tested tolerance
  Rational d = Rational::pow2_inv(static_cast<int>(n)) -
               (m > 62 ? Rational(0) : Rational::pow2_inv(static_cast<int>(m)));
  return d <= Rational::inv(k);
}

uint64_t mct_rate(const std::function<std::optional<uint64_t>(const std::vector<uint64_t>&)>& mu,
                  const std::vector<uint64_t>& f, uint64_t k, uint64_t window) {
  uint64_t e = 0;
  while ((uint64_t(1) << e) < k && e < 63) ++e;  // 2^e >= k
  auto p = mu(f);
  uint64_t N = p ? std::max(*p + 1, e) : 0;
  if (N > window) throw WindowTooSmall("rate " + std::to_string(N) + " beyond window " +
                                       std::to_string(window));
  return N;
}

uint64_t mu_from_rate(const std::function<uint64_t(uint64_t)>& rate,
                      const std::vector<uint64_t>& f) {
  // The jump at the first zero exceeds 1/2, so a rate for tolerance 1/3
  // brackets it.
  uint64_t N = rate(3);
  for (uint64_t n = 0; n <= N && n < f.size(); ++n)
    if (f[n] == 0) return n;
  throw NoZero("no zero at or below the rate bound " + std::to_string(N));
}

// ---------------------------------------------------------------------------
// Fan functionals

namespace {

// alpha as a leaf index: most significant bit = alpha(0).
uint64_t leaf_of_bits(const std::vector<uint8_t>& bits, int depth) {
  uint64_t leaf = 0;
  for (int i = 0; i < depth; ++i) {
    uint8_t b = i < static_cast<int>(bits.size()) ? bits[i] : 0;
    leaf = (leaf << 1) | (b & 1u);
  }
  return leaf;
}

std::vector<uint8_t> bits_of_leaf(uint64_t leaf, int depth) {
  std::vector<uint8_t> bits(depth);
  for (int i = 0; i < depth; ++i) bits[i] = (leaf >> (depth - 1 - i)) & 1u;
  return bits;
}

}  // namespace

uint64_t fan_modulus_muc(const std::vector<uint64_t>& leafTable, int depth) {
  if (leafTable.size() != (uint64_t(1) << depth))
    throw Error("leaf table size does not match depth");
  for (int N = 0; N <= depth; ++N) {
    bool ok = true;
    uint64_t groups = uint64_t(1) << N;
    uint64_t groupSize = uint64_t(1) << (depth - N);
    for (uint64_t g = 0; g < groups && ok; ++g) {
      uint64_t ref = leafTable[g * groupSize];
      for (uint64_t i = 1; i < groupSize; ++i)
        if (leafTable[g * groupSize + i] != ref) {
          ok = false;
          break;
        }
    }
    if (ok) return N;
  }
  throw NotUniform("table varies below depth " + std::to_string(depth));
}

FanWitness special_fan_from_muc(const std::vector<uint64_t>& g, int depth) {
  uint64_t N = fan_modulus_muc(g, depth);
  // Uniform bound of g over Cantor space: max over the modulus prefixes,
  // evaluated at the zero-padded representatives.
  uint64_t N1 = 0;
  for (uint64_t pre = 0; pre < (uint64_t(1) << N); ++pre) {
    uint64_t leaf = pre << (depth - N);
    N1 = std::max(N1, g[leaf]);
  }
  FanWitness w;
  w.bound = N1;
  for (uint64_t c = 0; c < (uint64_t(1) << N1); ++c)
    w.candidates.push_back(bits_of_leaf(c, static_cast<int>(N1)));
  return w;
}

namespace {

// A prefix-closed binary tree of depth <= d as the set of its nodes (the
// empty string is the root).  Enumeration is structural: empty, or a root
// with two subtrees.
using Tree = std::set<std::string>;

void enumerate_trees(int depth, std::vector<Tree>& out) {
  if (depth == 0) {
    out.push_back({});
    out.push_back({""});
    return;
  }
  std::vector<Tree> sub;
  enumerate_trees(depth - 1, sub);
  out.push_back({});
  for (const Tree& l : sub) {
    for (const Tree& r : sub) {
      Tree t{""};
      for (const auto& n : l) t.insert("0" + n);
      for (const auto& n : r) t.insert("1" + n);
      out.push_back(std::move(t));
    }
  }
}

std::string prefix_string(const std::vector<uint8_t>& bits, uint64_t len) {
  std::string s;
  for (uint64_t i = 0; i < len; ++i)
    s.push_back(i < bits.size() ? ('0' + bits[i]) : '0');
  return s;
}

}  // namespace

bool check_scf(const FanWitness& theta, const std::vector<uint64_t>& g, int depth,
               std::string* counterexample, int depthCap) {
  if (depth > depthCap)
    throw DepthTooLarge("tree enumeration capped at depth " + std::to_string(depthCap));
  if (g.size() != (uint64_t(1) << depth)) throw Error("leaf table size does not match depth");

  std::vector<Tree> trees;
  enumerate_trees(depth, trees);

  for (const Tree& T : trees) {
    auto in_tree = [&](const std::string& node) {
      if (node.size() > static_cast<size_t>(depth)) return false;
      return T.count(node) > 0;
    };
    // Antecedent: every candidate's neighbourhood leaves the tree.
    bool antecedent = true;
    for (const auto& alpha : theta.candidates) {
      uint64_t leaf = leaf_of_bits(alpha, depth);
      uint64_t galpha = g[leaf];
      if (in_tree(prefix_string(alpha, galpha))) {
        antecedent = false;
        break;
      }
    }
    if (!antecedent) continue;
    // Consequent: every branch leaves the tree by level bound.
    for (uint64_t leaf = 0; leaf < (uint64_t(1) << depth); ++leaf) {
      std::vector<uint8_t> beta = bits_of_leaf(leaf, depth);
      bool escapes = false;
      for (uint64_t i = 0; i <= theta.bound; ++i) {
        if (!in_tree(prefix_string(beta, i))) {
          escapes = true;
          break;
        }
      }
      if (!escapes) {
        if (counterexample) {
          std::string desc = "tree {";
          for (const auto& n : T) desc += (n.empty() ? "<root>" : n) + " ";
          desc += "} branch " + prefix_string(beta, depth);
          *counterexample = desc;
        }
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Riemann oracles

std::vector<Partition> grid_partition_family(int denomBound, int fullPatternCells) {
  std::vector<Partition> family;
  for (int d = 1; d <= denomBound; ++d) {
    if (d <= fullPatternCells) {
      for (unsigned pattern = 0; pattern < (1u << d); ++pattern)
        family.push_back(Partition::uniform_pattern(d, pattern));
    } else {
      family.push_back(Partition::uniform(d, Partition::TagRule::Left));
      family.push_back(Partition::uniform(d, Partition::TagRule::Right));
      family.push_back(Partition::uniform(d, Partition::TagRule::Alternate));
    }
  }
  return family;
}

bool riemann_modulus_validates(const RealFn& f, uint64_t N, uint64_t k, int denomBound) {
  if (k == 0) return true;
  auto family = grid_partition_family(denomBound);
  std::vector<std::pair<Rational, Rational>> fine;  // (mesh, sum)
  Rational tol = Rational::inv(k);
  Rational cutoff = inv_or_huge(N);
  for (const auto& p : family) {
    if (!(p.mesh() < cutoff)) continue;
    fine.emplace_back(p.mesh(), riemann_sum(f, p));
  }
  for (size_t i = 0; i < fine.size(); ++i)
    for (size_t j = i + 1; j < fine.size(); ++j)
      if (!((fine[i].second - fine[j].second).abs() < tol)) return false;
  return true;
}

std::optional<uint64_t> riemann_modulus_oracle(const RealFn& f, uint64_t k, int denomBound) {
  for (uint64_t N = 1; N <= static_cast<uint64_t>(denomBound); ++N)
    if (riemann_modulus_validates(f, N, k, denomBound)) return N;
  return std::nullopt;
}

Rational approx_ivt_oracle(const RealFn& f, uint64_t k, int denomBound) {
  if (k == 0) k = 1;
  Rational tol = Rational::inv(static_cast<int64_t>(k));
  // Prefer the first sign-change cell: its better endpoint is an approximate
  // root whenever the function respects the advertised precision.
  for (int j = 0; j < denomBound; ++j) {
    Rational a(j, denomBound), b(j + 1, denomBound);
    Rational fa = f(a), fb = f(b);
    if ((fa * fb).sign() <= 0) {
      Rational q = fa.abs() <= fb.abs() ? a : b;
      if (f(q).abs() < tol) return q;
    }
  }
  for (int j = 0; j <= denomBound; ++j) {
    Rational q(j, denomBound);
    if (f(q).abs() < tol) return q;
  }
  throw NoApproxRoot("no grid point within 1/" + std::to_string(k));
}

}  // namespace nsx
