#include "mmk/pr.hpp"

#include <cassert>

namespace mmk::pr {

namespace {
std::shared_ptr<PRFunction> node(NodeKind k, int arity) {
  auto p = std::make_shared<PRFunction>();
  p->kind = k;
  p->arity = arity;
  return p;
}
}  // namespace

PRPtr zero() {
  auto p = node(NodeKind::Zero, 1);
  return p;
}

PRPtr succ() { return node(NodeKind::Succ, 1); }

PRPtr proj(int i, int k) {
  if (k < 1 || i < 1 || i > k) throw ArityError("proj: need 1 <= i <= k");
  auto p = node(NodeKind::Proj, k);
  p->i = i;
  p->k = k;
  return p;
}

PRPtr comp(PRPtr f, std::vector<PRPtr> gs) {
  if (gs.empty()) throw ArityError("comp: needs at least one inner function");
  if (static_cast<size_t>(f->arity) != gs.size())
    throw ArityError("comp: outer arity does not match inner count");
  int a = gs[0]->arity;
  for (const auto& g : gs)
    if (g->arity != a) throw ArityError("comp: inner arities disagree");
  auto p = node(NodeKind::Comp, a);
  p->free_rec = f->free_rec;
  for (const auto& g : gs) p->free_rec = p->free_rec || g->free_rec;
  p->f = std::move(f);
  p->gs = std::move(gs);
  return p;
}

PRPtr prec(PRPtr base, PRPtr step) {
  if (step->arity != base->arity + 2)
    throw ArityError("prec: step arity must be base arity + 2");
  auto p = node(NodeKind::Prec, base->arity + 1);
  p->free_rec = base->free_rec || step->free_rec;
  p->f = std::move(base);
  p->g = std::move(step);
  return p;
}

PRPtr bmin(PRPtr f) {
  if (f->arity < 1) throw ArityError("bmin: body needs arity >= 1");
  auto p = node(NodeKind::Bmin, f->arity);
  p->free_rec = f->free_rec;
  p->f = std::move(f);
  return p;
}

PRPtr constant(const Nat& c, int arity) {
  if (arity < 1) throw ArityError("const: arity must be >= 1");
  auto p = node(NodeKind::Const, arity);
  p->value = c;
  return p;
}

PRPtr native_fn(Native n) {
  auto p = node(NodeKind::Native, native_arity(n));
  p->native = n;
  return p;
}

PRPtr cvrec(PRPtr body) {
  if (body->arity < 1) throw ArityError("cvrec: body needs arity >= 1");
  auto p = node(NodeKind::Cvrec, body->arity);
  p->f = std::move(body);
  // rec nodes in the body are bound here
  return p;
}

PRPtr rec_call(PRPtr t) {
  auto p = node(NodeKind::Rec, t->arity);
  p->free_rec = true;
  p->f = std::move(t);
  return p;
}

PRPtr cond(PRPtr c, PRPtr a, PRPtr b) {
  if (c->arity != a->arity || a->arity != b->arity) throw ArityError("cond: arities disagree");
  auto p = node(NodeKind::Cond, c->arity);
  p->free_rec = c->free_rec || a->free_rec || b->free_rec;
  p->gs = {std::move(a), std::move(b)};
  p->f = std::move(c);
  return p;
}

int native_arity(Native n) {
  switch (n) {
    case Native::Pow2:
    case Native::BitLen:
      return 1;
    default:
      return 2;
  }
}

const char* native_name(Native n) {
  switch (n) {
    case Native::Add: return "add";
    case Native::Mul: return "mul";
    case Native::Monus: return "monus";
    case Native::Div: return "div";
    case Native::Mod: return "mod";
    case Native::Pow2: return "pow2";
    case Native::BitLen: return "bitlen";
    case Native::Ltb: return "ltb";
    case Native::Leb: return "leb";
    case Native::Eqb: return "eqb";
  }
  return "?";
}

namespace {

Nat eval_native(Native n, const std::vector<Nat>& a) {
  switch (n) {
    case Native::Add:
      return a[0] + a[1];
    case Native::Mul:
      return a[0] * a[1];
    case Native::Monus:
      return a[0] >= a[1] ? Nat(a[0] - a[1]) : Nat(0);
    case Native::Div:
      return a[1] == 0 ? Nat(0) : Nat(a[0] / a[1]);
    case Native::Mod:
      return a[1] == 0 ? a[0] : Nat(a[0] % a[1]);
    case Native::Pow2: {
      if (a[0] > 4000000000ul) throw std::runtime_error("pow2: exponent out of range");
      return pow2(a[0].get_ui());
    }
    case Native::BitLen:
      return Nat(bit_length(a[0]));
    case Native::Ltb:
      return Nat(a[0] < a[1] ? 1 : 0);
    case Native::Leb:
      return Nat(a[0] <= a[1] ? 1 : 0);
    case Native::Eqb:
      return Nat(a[0] == a[1] ? 1 : 0);
  }
  throw std::logic_error("unreachable");
}

using ArgsPtr = std::shared_ptr<const std::vector<Nat>>;

struct Frame {
  const PRFunction* n;
  ArgsPtr args;
  EvalContext::Memo* act;        // memo of the innermost enclosing cvrec activation
  const PRFunction* act_node;    // its cvrec node (body lives at act_node->f)
  int stage = 0;
  std::vector<Nat> vals;         // collected child results
  Nat counter;                   // Prec/Bmin loop counter, Rec target value
  Nat accum;                     // Prec running value
};

}  // namespace

Nat eval_pr(const PRPtr& f, const std::vector<Nat>& args, EvalContext& ctx) {
  if (static_cast<size_t>(f->arity) != args.size()) throw ArityError("eval_pr: argument count");
  if (f->free_rec) throw std::logic_error("eval_pr: rec node outside cvrec");

  std::vector<Frame> stack;
  stack.push_back({f.get(), std::make_shared<std::vector<Nat>>(args), nullptr, nullptr, 0, {}, 0, 0});
  Nat ret;

  auto push = [&](const PRFunction* n, ArgsPtr a, EvalContext::Memo* act, const PRFunction* act_node) {
    stack.push_back({n, std::move(a), act, act_node, 0, {}, 0, 0});
  };

  while (!stack.empty()) {
    Frame& fr = stack.back();
    const PRFunction* n = fr.n;
    const std::vector<Nat>& a = *fr.args;
    switch (n->kind) {
      case NodeKind::Zero:
        ret = 0;
        stack.pop_back();
        break;
      case NodeKind::Succ:
        ret = a[0] + 1;
        stack.pop_back();
        break;
      case NodeKind::Proj:
        ret = a[n->i - 1];
        stack.pop_back();
        break;
      case NodeKind::Const:
        ret = n->value;
        stack.pop_back();
        break;
      case NodeKind::Native:
        ret = eval_native(n->native, a);
        stack.pop_back();
        break;
      case NodeKind::Comp: {
        size_t k = n->gs.size();
        if (fr.stage > 0 && static_cast<size_t>(fr.stage) <= k) fr.vals.push_back(ret);
        if (static_cast<size_t>(fr.stage) < k) {
          const PRFunction* child = n->gs[fr.stage].get();
          ++fr.stage;
          push(child, fr.args, fr.act, fr.act_node);
        } else if (static_cast<size_t>(fr.stage) == k) {
          ++fr.stage;
          auto inner = std::make_shared<std::vector<Nat>>(std::move(fr.vals));
          push(n->f.get(), std::move(inner), fr.act, fr.act_node);
        } else {
          stack.pop_back();  // ret is the result of f
        }
        break;
      }
      case NodeKind::Cond: {
        if (fr.stage == 0) {
          fr.stage = 1;
          push(n->f.get(), fr.args, fr.act, fr.act_node);
        } else if (fr.stage == 1) {
          fr.stage = 2;
          const PRFunction* branch = (ret != 0 ? n->gs[0] : n->gs[1]).get();
          push(branch, fr.args, fr.act, fr.act_node);
        } else {
          stack.pop_back();
        }
        break;
      }
      case NodeKind::Prec: {
        // a = (n, rest); value chain base, step(i, prev, rest)
        if (fr.stage == 0) {
          fr.stage = 1;
          auto rest = std::make_shared<std::vector<Nat>>(a.begin() + 1, a.end());
          push(n->f.get(), std::move(rest), fr.act, fr.act_node);
        } else {
          if (fr.stage == 1) {
            fr.counter = 0;
            fr.stage = 2;
          } else {
            ++fr.counter;
          }
          fr.accum = ret;
          if (fr.counter < a[0]) {
            auto inner = std::make_shared<std::vector<Nat>>();
            inner->reserve(a.size() + 1);
            inner->push_back(fr.counter);
            inner->push_back(fr.accum);
            inner->insert(inner->end(), a.begin() + 1, a.end());
            push(n->g.get(), std::move(inner), fr.act, fr.act_node);
          } else {
            ret = fr.accum;
            stack.pop_back();
          }
        }
        break;
      }
      case NodeKind::Bmin: {
        // least y <= a[0] with f(y, rest) != 0, else a[0] + 1
        if (fr.stage == 1) {
          if (ret != 0) {
            ret = fr.counter;
            stack.pop_back();
            break;
          }
          ++fr.counter;
        } else {
          fr.counter = 0;
          fr.stage = 1;
        }
        if (fr.counter > a[0]) {
          ret = a[0] + 1;
          stack.pop_back();
        } else {
          auto inner = std::make_shared<std::vector<Nat>>();
          inner->reserve(a.size());
          inner->push_back(fr.counter);
          inner->insert(inner->end(), a.begin() + 1, a.end());
          push(n->f.get(), std::move(inner), fr.act, fr.act_node);
        }
        break;
      }
      case NodeKind::Cvrec: {
        if (fr.stage == 0) {
          EvalContext::ActKey key{n, std::vector<Nat>(a.begin() + 1, a.end())};
          EvalContext::Memo& memo = ctx.activations[std::move(key)];
          auto it = memo.find(a[0]);
          if (it != memo.end()) {
            ret = it->second;
            stack.pop_back();
            break;
          }
          fr.stage = 1;
          push(n->f.get(), fr.args, &memo, n);
        } else {
          EvalContext::ActKey key{n, std::vector<Nat>(a.begin() + 1, a.end())};
          ctx.activations[std::move(key)][a[0]] = ret;
          stack.pop_back();
        }
        break;
      }
      case NodeKind::Rec: {
        if (fr.stage == 0) {
          fr.stage = 1;
          push(n->f.get(), fr.args, fr.act, fr.act_node);
        } else if (fr.stage == 1) {
          if (fr.act == nullptr) throw std::logic_error("rec outside cvrec");
          fr.counter = ret;
          if (fr.counter >= a[0]) {  // ill-founded request: value 0
            ret = 0;
            stack.pop_back();
            break;
          }
          auto it = fr.act->find(fr.counter);
          if (it != fr.act->end()) {
            ret = it->second;
            stack.pop_back();
            break;
          }
          fr.stage = 2;
          auto inner = std::make_shared<std::vector<Nat>>();
          inner->reserve(a.size());
          inner->push_back(fr.counter);
          inner->insert(inner->end(), a.begin() + 1, a.end());
          push(fr.act_node->f.get(), std::move(inner), fr.act, fr.act_node);
        } else {
          (*fr.act)[fr.counter] = ret;
          stack.pop_back();
        }
        break;
      }
    }
  }
  return ret;
}

Nat eval_pr(const PRPtr& f, const std::vector<Nat>& args) {
  EvalContext ctx;
  return eval_pr(f, args, ctx);
}

// ---------------------------------------------------------------------------
// S-expression serialization

namespace {
Sexpr atom(const std::string& t) {
  Sexpr s;
  s.atom = true;
  s.text = t;
  return s;
}
}  // namespace

Sexpr pr_to_sexpr(const PRPtr& f) {
  Sexpr s;
  switch (f->kind) {
    case NodeKind::Zero:
      s.items = {atom("zero")};
      break;
    case NodeKind::Succ:
      s.items = {atom("succ")};
      break;
    case NodeKind::Proj:
      s.items = {atom("proj"), atom(std::to_string(f->i)), atom(std::to_string(f->k))};
      break;
    case NodeKind::Comp:
      s.items = {atom("comp"), pr_to_sexpr(f->f)};
      for (const auto& g : f->gs) s.items.push_back(pr_to_sexpr(g));
      break;
    case NodeKind::Prec:
      s.items = {atom("prec"), pr_to_sexpr(f->f), pr_to_sexpr(f->g)};
      break;
    case NodeKind::Bmin:
      s.items = {atom("bmin"), pr_to_sexpr(f->f)};
      break;
    case NodeKind::Const:
      s.items = {atom("const"), atom(f->value.get_str()), atom(std::to_string(f->arity))};
      break;
    case NodeKind::Native:
      s.items = {atom("native"), atom(native_name(f->native))};
      break;
    case NodeKind::Cvrec:
      s.items = {atom("cvrec"), pr_to_sexpr(f->f)};
      break;
    case NodeKind::Rec:
      s.items = {atom("rec"), pr_to_sexpr(f->f)};
      break;
    case NodeKind::Cond:
      s.items = {atom("cond"), pr_to_sexpr(f->f), pr_to_sexpr(f->gs[0]), pr_to_sexpr(f->gs[1])};
      break;
  }
  return s;
}

PRPtr pr_from_sexpr(const Sexpr& s) {
  if (s.atom) throw std::runtime_error("pr: expected a list");
  const std::string& h = s.head();
  auto sub = [&](size_t i) { return pr_from_sexpr(s.at(i)); };
  if (h == "zero") return zero();
  if (h == "succ") return succ();
  if (h == "proj") {
    if (s.size() != 3) throw std::runtime_error("proj: expected (proj i k)");
    return proj(std::stoi(s.at(1).text), std::stoi(s.at(2).text));
  }
  if (h == "comp") {
    if (s.size() < 3) throw std::runtime_error("comp: expected (comp f g...)");
    std::vector<PRPtr> gs;
    for (size_t i = 2; i < s.size(); ++i) gs.push_back(sub(i));
    return comp(sub(1), std::move(gs));
  }
  if (h == "prec") {
    if (s.size() != 3) throw std::runtime_error("prec: expected (prec base step)");
    return prec(sub(1), sub(2));
  }
  if (h == "bmin") {
    if (s.size() != 2) throw std::runtime_error("bmin: expected (bmin f)");
    return bmin(sub(1));
  }
  if (h == "const") {
    if (s.size() != 3) throw std::runtime_error("const: expected (const c k)");
    return constant(Nat(s.at(1).text), std::stoi(s.at(2).text));
  }
  if (h == "native") {
    const std::string& name = s.at(1).text;
    for (Native n : {Native::Add, Native::Mul, Native::Monus, Native::Div, Native::Mod,
                     Native::Pow2, Native::BitLen, Native::Ltb, Native::Leb, Native::Eqb}) {
      if (name == native_name(n)) return native_fn(n);
    }
    throw std::runtime_error("unknown native: " + name);
  }
  if (h == "cvrec") {
    if (s.size() != 2) throw std::runtime_error("cvrec: expected (cvrec body)");
    return cvrec(sub(1));
  }
  if (h == "rec") {
    if (s.size() != 2) throw std::runtime_error("rec: expected (rec t)");
    return rec_call(sub(1));
  }
  if (h == "cond") {
    if (s.size() != 4) throw std::runtime_error("cond: expected (cond c a b)");
    return cond(sub(1), sub(2), sub(3));
  }
  throw std::runtime_error("unknown pr form: " + h);
}

namespace lib {

PRPtr add() { return native_fn(Native::Add); }
PRPtr mul() { return native_fn(Native::Mul); }

PRPtr pred() {
  return comp(native_fn(Native::Monus), {proj(1, 1), constant(1, 1)});
}

PRPtr add_via_prec() {
  // add(n, x) = x + n by recursion on the first argument
  PRPtr base = proj(1, 1);
  PRPtr step = comp(succ(), {proj(2, 3)});
  return prec(base, step);
}

PRPtr fixture_poly() {
  // (x + y) * (x + 1)
  PRPtr sum = comp(native_fn(Native::Add), {proj(1, 2), proj(2, 2)});
  PRPtr xp1 = comp(native_fn(Native::Add), {proj(1, 2), constant(1, 2)});
  return comp(native_fn(Native::Mul), {sum, xp1});
}

PRPtr fixture_sq_pred() {
  // pred(x * x)
  PRPtr sq = comp(native_fn(Native::Mul), {proj(1, 1), proj(1, 1)});
  return comp(native_fn(Native::Monus), {sq, constant(1, 1)});
}

}  // namespace lib

}  // namespace mmk::pr
