#include "nsx/structure.hpp"

#include "nsx/error.hpp"

namespace nsx {

bool StructValue::operator==(const StructValue& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Nat) return nat == o.nat;
  return items == o.items;
}

std::string StructValue::to_string() const {
  switch (kind) {
    case Kind::Nat:
      return std::to_string(nat);
    case Kind::Seq: {
      std::string s = "<";
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) s += " ";
        s += items[i].to_string();
      }
      return s + ">";
    }
    case Kind::Fun: {
      std::string s = "{";
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(i) + "->" + items[i].to_string();
      }
      return s + "}";
    }
  }
  return "?";
}

FiniteStructure::FiniteStructure(int baseSize, int stThreshold, int seqLenCap, unsigned seed)
    : M_(baseSize), K_(stThreshold), seqCap_(seqLenCap), seed_(seed) {
  if (M_ <= 0 || K_ < 0 || K_ > M_) throw Error("bad structure parameters");
}

void FiniteStructure::interpret(const std::string& atom,
                                std::function<bool(const std::vector<StructValue>&)> fn) {
  atoms_[atom] = std::move(fn);
}

std::vector<StructValue> FiniteStructure::enumerate(const FinType& type) const {
  if (type.is_base()) {
    std::vector<StructValue> out;
    for (int i = 0; i < M_; ++i) out.push_back(StructValue::of(i));
    return out;
  }
  if (type.is_seq()) {
    std::vector<StructValue> elems = enumerate(type.elem());
    std::vector<StructValue> out{StructValue::seq({})};
    std::vector<std::vector<StructValue>> layer{{}};
    for (int len = 1; len <= seqCap_; ++len) {
      std::vector<std::vector<StructValue>> next;
      for (const auto& prefix : layer) {
        for (const auto& e : elems) {
          auto xs = prefix;
          xs.push_back(e);
          out.push_back(StructValue::seq(xs));
          next.push_back(std::move(xs));
        }
      }
      layer = std::move(next);
      if (out.size() > 4096) throw Unrepresentable("sequence domain for " + type.to_string());
    }
    return out;
  }
  // Arrow types: base domain only.
  if (!type.dom().is_base())
    throw Unrepresentable("function domain " + type.dom().to_string());
  std::vector<StructValue> codomain = enumerate(type.cod());
  size_t total = 1;
  for (int i = 0; i < M_; ++i) {
    total *= codomain.size();
    if (total > 4096) throw Unrepresentable("function space " + type.to_string());
  }
  std::vector<StructValue> out;
  std::vector<size_t> idx(M_, 0);
  while (true) {
    std::vector<StructValue> outs;
    for (int i = 0; i < M_; ++i) outs.push_back(codomain[idx[i]]);
    out.push_back(StructValue::fun(std::move(outs)));
    int pos = 0;
    while (pos < M_) {
      if (++idx[pos] < codomain.size()) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == M_) break;
  }
  return out;
}

bool FiniteStructure::is_standard(const StructValue& v) const {
  switch (v.kind) {
    case StructValue::Kind::Nat:
      return v.nat < static_cast<uint64_t>(K_);
    case StructValue::Kind::Seq:
    case StructValue::Kind::Fun:
      for (const auto& e : v.items)
        if (!is_standard(e)) return false;
      return true;
  }
  return false;
}

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_value(const StructValue& v, uint64_t h) {
  h = mix(h, static_cast<uint64_t>(v.kind) + 17);
  if (v.kind == StructValue::Kind::Nat) return mix(h, v.nat);
  for (const auto& e : v.items) h = hash_value(e, h);
  return h;
}

}  // namespace

bool FiniteStructure::atom_holds(const std::string& name,
                                 const std::vector<StructValue>& args) const {
  auto it = atoms_.find(name);
  if (it != atoms_.end()) return it->second(args);
  if (name == "in" && args.size() == 2 && args[1].kind == StructValue::Kind::Seq) {
    for (const auto& e : args[1].items)
      if (e == args[0]) return true;
    return false;
  }
  // Deterministic pseudo-random interpretation for opaque atoms.
  uint64_t h = seed_;
  for (char c : name) h = mix(h, static_cast<unsigned char>(c));
  for (const auto& a : args) h = hash_value(a, h);
  return (h >> 16) & 1u;
}

StructValue eval_term_struct(const Term& t, const FiniteStructure& s, const StructEnv& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = env.find(t.var_name());
      if (it == env.end()) throw Unrepresentable("unbound variable " + t.var_name());
      return it->second;
    }
    case Term::Kind::Zero:
      return StructValue::of(0);
    case Term::Kind::NumLit:
      return StructValue::of(t.num_value());
    case Term::Kind::Succ: {
      StructValue v = eval_term_struct(t.arg(), s, env);
      if (v.kind != StructValue::Kind::Nat) throw Unrepresentable("succ of non-number");
      return StructValue::of(v.nat + 1);
    }
    case Term::Kind::App: {
      StructValue f = eval_term_struct(t.fn(), s, env);
      StructValue a = eval_term_struct(t.arg(), s, env);
      if (f.kind != StructValue::Kind::Fun || a.kind != StructValue::Kind::Nat)
        throw Unrepresentable("application in structure");
      if (a.nat >= f.items.size()) throw Unrepresentable("argument outside table");
      return f.items[a.nat];
    }
    case Term::Kind::SeqLit: {
      std::vector<StructValue> xs;
      for (const Term& e : t.seq_elements()) xs.push_back(eval_term_struct(e, s, env));
      return StructValue::seq(std::move(xs));
    }
    case Term::Kind::SeqLen: {
      StructValue v = eval_term_struct(t.arg(), s, env);
      if (v.kind != StructValue::Kind::Seq) throw Unrepresentable("len of non-sequence");
      return StructValue::of(v.items.size());
    }
    case Term::Kind::SeqIdx: {
      StructValue v = eval_term_struct(t.lhs(), s, env);
      StructValue i = eval_term_struct(t.rhs(), s, env);
      if (v.kind != StructValue::Kind::Seq || i.kind != StructValue::Kind::Nat)
        throw Unrepresentable("idx in structure");
      if (i.nat >= v.items.size()) throw Unrepresentable("index out of range");
      return v.items[i.nat];
    }
    case Term::Kind::SeqAppend: {
      StructValue a = eval_term_struct(t.lhs(), s, env);
      StructValue b = eval_term_struct(t.rhs(), s, env);
      if (a.kind != StructValue::Kind::Seq || b.kind != StructValue::Kind::Seq)
        throw Unrepresentable("cat in structure");
      auto xs = a.items;
      xs.insert(xs.end(), b.items.begin(), b.items.end());
      return StructValue::seq(std::move(xs));
    }
    default:
      throw Unrepresentable("term form in structure semantics: " + t.to_string());
  }
}

bool eval_formula(const Formula& f, const FiniteStructure& s, const StructEnv& env) {
  switch (f.kind()) {
    case Formula::Kind::AtomEq0:
      return eval_term_struct(f.term_lhs(), s, env) == eval_term_struct(f.term_rhs(), s, env);
    case Formula::Kind::AtomLe0: {
      StructValue a = eval_term_struct(f.term_lhs(), s, env);
      StructValue b = eval_term_struct(f.term_rhs(), s, env);
      if (a.kind != StructValue::Kind::Nat || b.kind != StructValue::Kind::Nat)
        throw Unrepresentable("<= on non-numbers");
      return a.nat <= b.nat;
    }
    case Formula::Kind::AtomPred: {
      // Arguments outside the finite fragment (higher-type parameters) are
      // treated opaquely: the atom keeps a deterministic truth value drawn
      // from its syntax and the values of its representable free variables.
      std::vector<StructValue> args;
      bool representable = true;
      for (const Term& t : f.pred_args()) {
        try {
          args.push_back(eval_term_struct(t, s, env));
        } catch (const Unrepresentable&) {
          representable = false;
          break;
        }
      }
      if (representable) return s.atom_holds(f.pred_name(), args);
      std::vector<StructValue> hashed;
      for (const Term& t : f.pred_args()) {
        try {
          hashed.push_back(eval_term_struct(t, s, env));
        } catch (const Unrepresentable&) {
          uint64_t h = 1469598103934665603ull;
          for (char c : t.to_string()) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
          for (const auto& v : t.free_vars()) {
            auto it = env.find(v);
            if (it != env.end()) {
              for (char c : it->second.to_string())
                h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
            }
          }
          hashed.push_back(StructValue::of(h));
        }
      }
      return s.atom_holds(f.pred_name(), hashed);
    }
    case Formula::Kind::St:
      return s.is_standard(eval_term_struct(f.st_term(), s, env));
    case Formula::Kind::Not:
      return !eval_formula(f.child(), s, env);
    case Formula::Kind::And:
      return eval_formula(f.lhs(), s, env) && eval_formula(f.rhs(), s, env);
    case Formula::Kind::Or:
      return eval_formula(f.lhs(), s, env) || eval_formula(f.rhs(), s, env);
    case Formula::Kind::Implies:
      return !eval_formula(f.lhs(), s, env) || eval_formula(f.rhs(), s, env);
    case Formula::Kind::Forall:
    case Formula::Kind::ForallSt: {
      bool onlySt = f.kind() == Formula::Kind::ForallSt;
      for (const auto& v : s.enumerate(f.qtype())) {
        if (onlySt && !s.is_standard(v)) continue;
        StructEnv e2 = env;
        e2[f.qvar()] = v;
        if (!eval_formula(f.body(), s, e2)) return false;
      }
      return true;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::ExistsSt: {
      bool onlySt = f.kind() == Formula::Kind::ExistsSt;
      for (const auto& v : s.enumerate(f.qtype())) {
        if (onlySt && !s.is_standard(v)) continue;
        StructEnv e2 = env;
        e2[f.qvar()] = v;
        if (eval_formula(f.body(), s, e2)) return true;
      }
      return false;
    }
    case Formula::Kind::ForallInf:
      throw Unrepresentable("infinitesimal quantifier has no finite semantics");
    case Formula::Kind::DefRef:
      throw Unrepresentable("unexpanded definition " + f.pred_name());
  }
  throw Error("unreachable formula kind");
}

}  // namespace nsx
