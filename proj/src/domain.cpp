#include "invstream/domain.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

#include "invstream/errors.hpp"
#include "invstream/eval.hpp"

namespace invstream::dom {

int Bound::cmp(const Bound& a, const Bound& b) {
  if (a.k == b.k) {
    if (a.k != K::Finite) return 0;
    return Rational::cmp(a.q, b.q);
  }
  if (a.k == K::NegInf) return -1;
  if (b.k == K::NegInf) return 1;
  if (a.k == K::PosInf) return 1;
  return -1;
}

std::string Bound::str() const {
  switch (k) {
    case K::NegInf: return "-inf";
    case K::PosInf: return "+inf";
    case K::Finite: return q.str();
  }
  return "?";
}

Term LinTemplate::to_term(const std::vector<Variable>& vars) const {
  Term acc;
  for (const auto& [idx, c] : coeffs) {
    Term v = mk_var(vars[static_cast<size_t>(idx)].name, Epoch::Current);
    Rational a = c.abs();
    Term piece = a == Rational(1) ? v : mk_mul(a.is_integer() ? mk_int(a) : mk_real(a), v);
    if (!acc) {
      acc = c.sign() < 0 ? mk_neg(piece) : piece;
    } else {
      acc = c.sign() < 0 ? mk_sub(acc, piece) : mk_add(acc, piece);
    }
  }
  return acc;
}

std::string LinTemplate::render(const std::vector<Variable>& vars) const {
  std::string s;
  for (const auto& [idx, c] : coeffs) {
    Rational a = c.abs();
    if (s.empty()) {
      if (c.sign() < 0) s += "-";
    } else {
      s += c.sign() < 0 ? " - " : " + ";
    }
    if (a != Rational(1)) s += a.str() + "*";
    s += vars[static_cast<size_t>(idx)].name;
  }
  return s;
}

namespace {

std::string tpl_key(const LinTemplate& t) {
  auto coeffs = t.coeffs;
  std::sort(coeffs.begin(), coeffs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string k;
  for (const auto& [i, c] : coeffs) k += std::to_string(i) + ":" + c.str() + ";";
  return k;
}

}  // namespace

DomainSpecPtr DomainSpec::make(DomainKind kind, std::vector<Variable> vars,
                               std::vector<Term> predicates,
                               std::vector<LinTemplate> custom_templates) {
  auto spec = std::make_shared<DomainSpec>();
  spec->kind = kind;
  spec->vars = std::move(vars);
  for (size_t i = 0; i < spec->vars.size(); ++i) {
    (is_numeric(spec->vars[i].sort) ? spec->num_idx : spec->bool_idx).push_back(static_cast<int>(i));
  }
  if (kind != DomainKind::Interval) {
    if (!custom_templates.empty()) {
      spec->templates = std::move(custom_templates);
    } else {
      for (int j : spec->num_idx) {
        LinTemplate up;
        up.coeffs = {{j, Rational(1)}};
        spec->templates.push_back(up);
        LinTemplate dn;
        dn.coeffs = {{j, Rational(-1)}};
        spec->templates.push_back(dn);
      }
      for (int j : spec->num_idx) {
        for (int k : spec->num_idx) {
          if (j == k) continue;
          LinTemplate d;
          d.coeffs = {{j, Rational(1)}, {k, Rational(-1)}};  // x_j - x_k
          spec->templates.push_back(d);
        }
      }
    }
    for (LinTemplate& t : spec->templates) {
      t.all_int = true;
      for (auto& [i, c] : t.coeffs) {
        if (spec->vars[static_cast<size_t>(i)].sort != Sort::Int || !c.is_integer())
          t.all_int = false;
      }
    }
    // locate each template's negation for canonical-bottom detection
    std::map<std::string, int> by_key;
    for (size_t i = 0; i < spec->templates.size(); ++i)
      by_key[tpl_key(spec->templates[i])] = static_cast<int>(i);
    for (const LinTemplate& t : spec->templates) {
      LinTemplate n = t;
      for (auto& [i, c] : n.coeffs) c = -c;
      auto it = by_key.find(tpl_key(n));
      spec->neg_tpl.push_back(it == by_key.end() ? -1 : it->second);
    }
  }
  if (kind == DomainKind::Partitioned) {
    if (predicates.empty()) throw ConfigError("partitioned domain needs at least one predicate");
    if (predicates.size() > 8) throw ConfigError("at most 8 partition predicates are supported");
    spec->predicates = std::move(predicates);
  }
  return spec;
}

namespace {

// ---- interval layer ----

IntervalData iv_bottom(const DomainSpec& s) {
  IntervalData d;
  d.bottom = true;
  d.num.assign(s.num_idx.size(), {Bound::finite(Rational(1)), Bound::finite(Rational(0))});
  d.bools.assign(s.bool_idx.size(), 0);
  return d;
}

IntervalData iv_top(const DomainSpec& s) {
  IntervalData d;
  d.num.assign(s.num_idx.size(), {Bound::neg_inf(), Bound::pos_inf()});
  d.bools.assign(s.bool_idx.size(), 3);
  return d;
}

void iv_canon(const DomainSpec& s, IntervalData& d) {
  if (d.bottom) {
    d = iv_bottom(s);
    return;
  }
  for (size_t i = 0; i < d.num.size(); ++i) {
    auto& [lo, hi] = d.num[i];
    if (s.vars[static_cast<size_t>(s.num_idx[i])].sort == Sort::Int) {
      if (lo.is_finite()) lo.q = lo.q.ceil();
      if (hi.is_finite()) hi.q = hi.q.floor();
    }
    if (hi < lo) {
      d = iv_bottom(s);
      return;
    }
  }
  for (uint8_t b : d.bools) {
    if (b == 0) {
      d = iv_bottom(s);
      return;
    }
  }
}

bool iv_leq(const IntervalData& a, const IntervalData& b) {
  if (a.bottom) return true;
  if (b.bottom) return false;
  for (size_t i = 0; i < a.num.size(); ++i) {
    if (a.num[i].first < b.num[i].first || b.num[i].second < a.num[i].second) return false;
  }
  for (size_t i = 0; i < a.bools.size(); ++i) {
    if (a.bools[i] & ~b.bools[i]) return false;
  }
  return true;
}

IntervalData iv_join(const DomainSpec& s, const IntervalData& a, const IntervalData& b) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  IntervalData r = a;
  for (size_t i = 0; i < r.num.size(); ++i) {
    if (b.num[i].first < r.num[i].first) r.num[i].first = b.num[i].first;
    if (r.num[i].second < b.num[i].second) r.num[i].second = b.num[i].second;
  }
  for (size_t i = 0; i < r.bools.size(); ++i) r.bools[i] |= b.bools[i];
  iv_canon(s, r);
  return r;
}

IntervalData iv_meet(const DomainSpec& s, const IntervalData& a, const IntervalData& b) {
  if (a.bottom) return a;
  if (b.bottom) return b;
  IntervalData r = a;
  for (size_t i = 0; i < r.num.size(); ++i) {
    if (r.num[i].first < b.num[i].first) r.num[i].first = b.num[i].first;
    if (b.num[i].second < r.num[i].second) r.num[i].second = b.num[i].second;
  }
  for (size_t i = 0; i < r.bools.size(); ++i) r.bools[i] &= b.bools[i];
  iv_canon(s, r);
  return r;
}

Bound widen_up(const Bound& a, const Bound& b, const std::set<Rational>& thr, bool integral) {
  if (Bound::cmp(b, a) <= 0) return a;  // stable
  if (!b.is_finite()) return Bound::pos_inf();
  for (const Rational& t : thr) {
    Rational adj = integral ? t.floor() : t;
    if (adj >= b.q) return Bound::finite(adj);
  }
  return Bound::pos_inf();
}

Bound widen_down(const Bound& a, const Bound& b, const std::set<Rational>& thr, bool integral) {
  if (Bound::cmp(a, b) <= 0) return a;
  if (!b.is_finite()) return Bound::neg_inf();
  for (auto it = thr.rbegin(); it != thr.rend(); ++it) {
    Rational adj = integral ? it->ceil() : *it;
    if (adj <= b.q) return Bound::finite(adj);
  }
  return Bound::neg_inf();
}

IntervalData iv_widen(const DomainSpec& s, const IntervalData& a, const IntervalData& b,
                      const std::set<Rational>& thr) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  IntervalData r = a;
  for (size_t i = 0; i < r.num.size(); ++i) {
    bool integral = s.vars[static_cast<size_t>(s.num_idx[i])].sort == Sort::Int;
    r.num[i].first = widen_down(a.num[i].first, b.num[i].first, thr, integral);
    r.num[i].second = widen_up(a.num[i].second, b.num[i].second, thr, integral);
  }
  for (size_t i = 0; i < r.bools.size(); ++i) r.bools[i] = a.bools[i] | b.bools[i];
  iv_canon(s, r);
  return r;
}

// ---- template layer ----

TemplateData tp_bottom(const DomainSpec& s) {
  TemplateData d;
  d.bottom = true;
  d.ub.assign(s.templates.size(), Bound::pos_inf());
  return d;
}

TemplateData tp_top(const DomainSpec& s) {
  TemplateData d;
  d.ub.assign(s.templates.size(), Bound::pos_inf());
  return d;
}

void tp_canon(const DomainSpec& s, TemplateData& d) {
  if (d.bottom) {
    d = tp_bottom(s);
    return;
  }
  for (size_t i = 0; i < d.ub.size(); ++i) {
    if (s.templates[i].all_int && d.ub[i].is_finite()) d.ub[i].q = d.ub[i].q.floor();
  }
  // canonical infeasibility: t <= c and -t <= d with c + d < 0
  for (size_t i = 0; i < d.ub.size(); ++i) {
    int n = s.neg_tpl[i];
    if (n < 0 || static_cast<size_t>(n) < i) continue;
    if (d.ub[i].is_finite() && d.ub[static_cast<size_t>(n)].is_finite() &&
        (d.ub[i].q + d.ub[static_cast<size_t>(n)].q).sign() < 0) {
      d = tp_bottom(s);
      return;
    }
  }
}

bool tp_leq(const TemplateData& a, const TemplateData& b) {
  if (a.bottom) return true;
  if (b.bottom) return false;
  for (size_t i = 0; i < a.ub.size(); ++i) {
    if (b.ub[i] < a.ub[i]) return false;
  }
  return true;
}

TemplateData tp_join(const DomainSpec& s, const TemplateData& a, const TemplateData& b) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  TemplateData r = a;
  for (size_t i = 0; i < r.ub.size(); ++i) {
    if (r.ub[i] < b.ub[i]) r.ub[i] = b.ub[i];
  }
  tp_canon(s, r);
  return r;
}

TemplateData tp_meet(const DomainSpec& s, const TemplateData& a, const TemplateData& b) {
  if (a.bottom) return a;
  if (b.bottom) return b;
  TemplateData r = a;
  for (size_t i = 0; i < r.ub.size(); ++i) {
    if (b.ub[i] < r.ub[i]) r.ub[i] = b.ub[i];
  }
  tp_canon(s, r);
  return r;
}

TemplateData tp_widen(const DomainSpec& s, const TemplateData& a, const TemplateData& b,
                      const std::set<Rational>& thr) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  TemplateData r = a;
  for (size_t i = 0; i < r.ub.size(); ++i) {
    r.ub[i] = widen_up(a.ub[i], b.ub[i], thr, s.templates[i].all_int);
  }
  tp_canon(s, r);
  return r;
}

// ---- product layer ----

ProductData pr_bottom(const DomainSpec& s) { return {iv_bottom(s), tp_bottom(s)}; }
ProductData pr_top(const DomainSpec& s) { return {iv_top(s), tp_top(s)}; }

bool pr_is_bottom(const ProductData& p) { return p.iv.bottom || p.tp.bottom; }

// One propagation pass between single-variable templates and interval
// bounds, run after meets. Not a closure.
void pr_reduce(const DomainSpec& s, ProductData& p) {
  if (pr_is_bottom(p)) {
    p = pr_bottom(s);
    return;
  }
  std::vector<int> num_pos(s.vars.size(), -1);
  for (size_t i = 0; i < s.num_idx.size(); ++i) num_pos[static_cast<size_t>(s.num_idx[i])] = static_cast<int>(i);
  for (size_t t = 0; t < s.templates.size(); ++t) {
    const LinTemplate& tpl = s.templates[t];
    if (tpl.coeffs.size() != 1) continue;
    int vi = tpl.coeffs[0].first;
    int pos = num_pos[static_cast<size_t>(vi)];
    auto& [lo, hi] = p.iv.num[static_cast<size_t>(pos)];
    if (tpl.coeffs[0].second == Rational(1)) {
      if (p.tp.ub[t] < hi) hi = p.tp.ub[t];
      if (hi < p.tp.ub[t]) p.tp.ub[t] = hi;
    } else if (tpl.coeffs[0].second == Rational(-1)) {
      // -x <= c  means  x >= -c
      if (p.tp.ub[t].is_finite()) {
        Bound from_tpl = Bound::finite(-p.tp.ub[t].q);
        if (lo < from_tpl) lo = from_tpl;
      }
      if (lo.is_finite()) {
        Bound from_iv = Bound::finite(-lo.q);
        if (from_iv < p.tp.ub[t]) p.tp.ub[t] = from_iv;
      }
    }
  }
  iv_canon(s, p.iv);
  tp_canon(s, p.tp);
  if (pr_is_bottom(p)) p = pr_bottom(s);
}

ProductData pr_join(const DomainSpec& s, const ProductData& a, const ProductData& b) {
  if (pr_is_bottom(a)) return b;
  if (pr_is_bottom(b)) return a;
  return {iv_join(s, a.iv, b.iv), tp_join(s, a.tp, b.tp)};
}

ProductData pr_meet(const DomainSpec& s, const ProductData& a, const ProductData& b) {
  if (pr_is_bottom(a)) return pr_bottom(s);
  if (pr_is_bottom(b)) return pr_bottom(s);
  ProductData r{iv_meet(s, a.iv, b.iv), tp_meet(s, a.tp, b.tp)};
  pr_reduce(s, r);
  return r;
}

ProductData pr_widen(const DomainSpec& s, const ProductData& a, const ProductData& b,
                     const std::set<Rational>& thr) {
  if (pr_is_bottom(a)) return b;
  if (pr_is_bottom(b)) return a;
  return {iv_widen(s, a.iv, b.iv, thr), tp_widen(s, a.tp, b.tp, thr)};
}

bool pr_leq(const ProductData& a, const ProductData& b) {
  if (pr_is_bottom(a)) return true;
  if (pr_is_bottom(b)) return false;
  return iv_leq(a.iv, b.iv) && tp_leq(a.tp, b.tp);
}

// ---- conjunct building ----

Term bound_const(const Rational& q) { return q.is_integer() ? mk_int(q) : mk_real(q); }

void iv_conjuncts(const DomainSpec& s, const IntervalData& d, std::vector<Term>& out) {
  for (size_t i = 0; i < d.num.size(); ++i) {
    const Variable& v = s.vars[static_cast<size_t>(s.num_idx[i])];
    Term x = mk_var(v.name, Epoch::Current);
    if (d.num[i].first.is_finite()) out.push_back(mk_le(bound_const(d.num[i].first.q), x));
    if (d.num[i].second.is_finite()) out.push_back(mk_le(x, bound_const(d.num[i].second.q)));
  }
  for (size_t i = 0; i < d.bools.size(); ++i) {
    const Variable& v = s.vars[static_cast<size_t>(s.bool_idx[i])];
    Term x = mk_var(v.name, Epoch::Current);
    if (d.bools[i] == 2) out.push_back(x);
    if (d.bools[i] == 1) out.push_back(mk_not(x));
  }
}

void tp_conjuncts(const DomainSpec& s, const TemplateData& d, std::vector<Term>& out) {
  for (size_t i = 0; i < d.ub.size(); ++i) {
    if (!d.ub[i].is_finite()) continue;
    out.push_back(mk_le(s.templates[i].to_term(s.vars), bound_const(d.ub[i].q)));
  }
}

std::vector<Term> pr_conjuncts(const DomainSpec& s, const ProductData& p) {
  std::vector<Term> out;
  iv_conjuncts(s, p.iv, out);
  tp_conjuncts(s, p.tp, out);
  return out;
}

Term cell_formula(const DomainSpec& s, size_t cell) {
  std::vector<Term> lits;
  for (size_t i = 0; i < s.predicates.size(); ++i) {
    bool pos = (cell >> i) & 1;
    lits.push_back(pos ? s.predicates[i] : mk_not(s.predicates[i]));
  }
  return mk_and_all(lits);
}

void dedupe(std::vector<Term>& ts) {
  std::unordered_set<std::string> seen;
  std::vector<Term> out;
  for (Term& t : ts) {
    if (seen.insert(term_str(t)).second) out.push_back(std::move(t));
  }
  ts = std::move(out);
}

}  // namespace

AbstractElement bottom(const DomainSpecPtr& spec) {
  AbstractElement e;
  e.spec = spec;
  switch (spec->kind) {
    case DomainKind::Interval: e.data = iv_bottom(*spec); break;
    case DomainKind::Template: e.data = tp_bottom(*spec); break;
    case DomainKind::Product: e.data = pr_bottom(*spec); break;
    case DomainKind::Partitioned: {
      PartitionData p;
      p.cells.assign(size_t{1} << spec->predicates.size(), pr_bottom(*spec));
      e.data = std::move(p);
      break;
    }
  }
  return e;
}

AbstractElement top(const DomainSpecPtr& spec) {
  AbstractElement e;
  e.spec = spec;
  switch (spec->kind) {
    case DomainKind::Interval: e.data = iv_top(*spec); break;
    case DomainKind::Template: e.data = tp_top(*spec); break;
    case DomainKind::Product: e.data = pr_top(*spec); break;
    case DomainKind::Partitioned: {
      PartitionData p;
      p.cells.assign(size_t{1} << spec->predicates.size(), pr_top(*spec));
      e.data = std::move(p);
      break;
    }
  }
  return e;
}

bool is_bottom(const AbstractElement& a) {
  switch (a.spec->kind) {
    case DomainKind::Interval: return std::get<IntervalData>(a.data).bottom;
    case DomainKind::Template: return std::get<TemplateData>(a.data).bottom;
    case DomainKind::Product: return pr_is_bottom(std::get<ProductData>(a.data));
    case DomainKind::Partitioned: {
      for (const ProductData& c : std::get<PartitionData>(a.data).cells) {
        if (!pr_is_bottom(c)) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {
void check_same(const AbstractElement& a, const AbstractElement& b) {
  if (a.spec.get() != b.spec.get() || a.data.index() != b.data.index())
    throw Error("abstract domain kind/variable mismatch");
}
}  // namespace

bool leq(const AbstractElement& a, const AbstractElement& b) {
  check_same(a, b);
  switch (a.spec->kind) {
    case DomainKind::Interval:
      return iv_leq(std::get<IntervalData>(a.data), std::get<IntervalData>(b.data));
    case DomainKind::Template:
      return tp_leq(std::get<TemplateData>(a.data), std::get<TemplateData>(b.data));
    case DomainKind::Product:
      return pr_leq(std::get<ProductData>(a.data), std::get<ProductData>(b.data));
    case DomainKind::Partitioned: {
      const auto& pa = std::get<PartitionData>(a.data);
      const auto& pb = std::get<PartitionData>(b.data);
      for (size_t i = 0; i < pa.cells.size(); ++i) {
        if (!pr_leq(pa.cells[i], pb.cells[i])) return false;
      }
      return true;
    }
  }
  return false;
}

bool elem_equal(const AbstractElement& a, const AbstractElement& b) {
  return leq(a, b) && leq(b, a);
}

AbstractElement join(const AbstractElement& a, const AbstractElement& b) {
  check_same(a, b);
  AbstractElement r;
  r.spec = a.spec;
  switch (a.spec->kind) {
    case DomainKind::Interval:
      r.data = iv_join(*a.spec, std::get<IntervalData>(a.data), std::get<IntervalData>(b.data));
      break;
    case DomainKind::Template:
      r.data = tp_join(*a.spec, std::get<TemplateData>(a.data), std::get<TemplateData>(b.data));
      break;
    case DomainKind::Product:
      r.data = pr_join(*a.spec, std::get<ProductData>(a.data), std::get<ProductData>(b.data));
      break;
    case DomainKind::Partitioned: {
      PartitionData p = std::get<PartitionData>(a.data);
      const auto& pb = std::get<PartitionData>(b.data);
      for (size_t i = 0; i < p.cells.size(); ++i) p.cells[i] = pr_join(*a.spec, p.cells[i], pb.cells[i]);
      r.data = std::move(p);
      break;
    }
  }
  return r;
}

AbstractElement meet(const AbstractElement& a, const AbstractElement& b) {
  check_same(a, b);
  AbstractElement r;
  r.spec = a.spec;
  switch (a.spec->kind) {
    case DomainKind::Interval:
      r.data = iv_meet(*a.spec, std::get<IntervalData>(a.data), std::get<IntervalData>(b.data));
      break;
    case DomainKind::Template:
      r.data = tp_meet(*a.spec, std::get<TemplateData>(a.data), std::get<TemplateData>(b.data));
      break;
    case DomainKind::Product:
      r.data = pr_meet(*a.spec, std::get<ProductData>(a.data), std::get<ProductData>(b.data));
      break;
    case DomainKind::Partitioned: {
      PartitionData p = std::get<PartitionData>(a.data);
      const auto& pb = std::get<PartitionData>(b.data);
      for (size_t i = 0; i < p.cells.size(); ++i) p.cells[i] = pr_meet(*a.spec, p.cells[i], pb.cells[i]);
      r.data = std::move(p);
      break;
    }
  }
  return r;
}

AbstractElement widen(const AbstractElement& a, const AbstractElement& b,
                      const std::set<Rational>& thresholds) {
  check_same(a, b);
  AbstractElement r;
  r.spec = a.spec;
  switch (a.spec->kind) {
    case DomainKind::Interval:
      r.data =
          iv_widen(*a.spec, std::get<IntervalData>(a.data), std::get<IntervalData>(b.data), thresholds);
      break;
    case DomainKind::Template:
      r.data =
          tp_widen(*a.spec, std::get<TemplateData>(a.data), std::get<TemplateData>(b.data), thresholds);
      break;
    case DomainKind::Product:
      r.data = pr_widen(*a.spec, std::get<ProductData>(a.data), std::get<ProductData>(b.data), thresholds);
      break;
    case DomainKind::Partitioned: {
      PartitionData p = std::get<PartitionData>(a.data);
      const auto& pb = std::get<PartitionData>(b.data);
      for (size_t i = 0; i < p.cells.size(); ++i)
        p.cells[i] = pr_widen(*a.spec, p.cells[i], pb.cells[i], thresholds);
      r.data = std::move(p);
      break;
    }
  }
  return r;
}

std::vector<Term> conjuncts(const AbstractElement& a) {
  if (is_bottom(a)) return {mk_false()};
  const DomainSpec& s = *a.spec;
  std::vector<Term> out;
  switch (s.kind) {
    case DomainKind::Interval:
      iv_conjuncts(s, std::get<IntervalData>(a.data), out);
      break;
    case DomainKind::Template:
      tp_conjuncts(s, std::get<TemplateData>(a.data), out);
      break;
    case DomainKind::Product:
      out = pr_conjuncts(s, std::get<ProductData>(a.data));
      break;
    case DomainKind::Partitioned: {
      const auto& p = std::get<PartitionData>(a.data);
      // facts shared by every cell come out unguarded (the hull over
      // cells is entailed by the guarded conjunction)
      ProductData hull = pr_bottom(s);
      for (const ProductData& c : p.cells) hull = pr_join(s, c, hull);
      std::vector<Term> hull_cs = pr_conjuncts(s, hull);
      std::unordered_set<std::string> hull_keys;
      for (const Term& c : hull_cs) hull_keys.insert(term_str(c));
      for (Term& c : hull_cs) out.push_back(std::move(c));
      for (size_t cell = 0; cell < p.cells.size(); ++cell) {
        Term cf = cell_formula(s, cell);
        if (pr_is_bottom(p.cells[cell])) {
          out.push_back(mk_not(cf));
          continue;
        }
        for (Term& c : pr_conjuncts(s, p.cells[cell])) {
          if (hull_keys.count(term_str(c))) continue;  // already unguarded
          out.push_back(mk_implies(cf, c));
        }
      }
      break;
    }
  }
  dedupe(out);
  return out;
}

Term gamma(const AbstractElement& a) {
  if (is_bottom(a)) return mk_false();
  std::vector<Term> cs = conjuncts(a);
  return mk_and_all(cs);
}

AbstractElement alpha_state(const DomainSpecPtr& spec, const State& v) {
  const DomainSpec& s = *spec;
  if (v.size() != s.vars.size()) throw Error("alpha_state: arity mismatch");

  auto point_interval = [&]() {
    IntervalData d;
    for (int i : s.num_idx) {
      const Rational& q = v[static_cast<size_t>(i)].as_rational();
      d.num.emplace_back(Bound::finite(q), Bound::finite(q));
    }
    for (int i : s.bool_idx) d.bools.push_back(v[static_cast<size_t>(i)].as_bool() ? 2 : 1);
    return d;
  };
  auto point_template = [&]() {
    TemplateData d;
    for (const LinTemplate& t : s.templates) {
      Rational val(0);
      for (const auto& [i, c] : t.coeffs) val = val + c * v[static_cast<size_t>(i)].as_rational();
      d.ub.push_back(Bound::finite(val));
    }
    return d;
  };

  AbstractElement e;
  e.spec = spec;
  switch (s.kind) {
    case DomainKind::Interval:
      e.data = point_interval();
      break;
    case DomainKind::Template:
      e.data = point_template();
      break;
    case DomainKind::Product:
      e.data = ProductData{point_interval(), point_template()};
      break;
    case DomainKind::Partitioned: {
      // evaluate partition predicates on the state to find its cell
      size_t cell = 0;
      auto assign = [&](const VarOcc& occ) -> std::optional<Value> {
        int idx = -1;
        for (size_t i = 0; i < s.vars.size(); ++i) {
          if (s.vars[i].name == occ.name) idx = static_cast<int>(i);
        }
        if (idx < 0 || occ.epoch != Epoch::Current) return std::nullopt;
        return v[static_cast<size_t>(idx)];
      };
      for (size_t i = 0; i < s.predicates.size(); ++i) {
        Value pv = eval_term(s.predicates[i], assign);
        if (pv.as_bool()) cell |= size_t{1} << i;
      }
      PartitionData p;
      p.cells.assign(size_t{1} << s.predicates.size(), pr_bottom(s));
      p.cells[cell] = ProductData{point_interval(), point_template()};
      e.data = std::move(p);
      break;
    }
  }
  return e;
}

// ---- text form ----

namespace {

std::string pr_render(const DomainSpec& s, const ProductData& p) {
  if (pr_is_bottom(p)) return "⊥";
  std::vector<std::string> parts;
  for (size_t i = 0; i < p.iv.num.size(); ++i) {
    const auto& [lo, hi] = p.iv.num[i];
    if (!lo.is_finite() && !hi.is_finite()) continue;
    parts.push_back(s.vars[static_cast<size_t>(s.num_idx[i])].name + " ∈ [" + lo.str() + ", " +
                    hi.str() + "]");
  }
  for (size_t i = 0; i < p.iv.bools.size(); ++i) {
    if (p.iv.bools[i] == 3) continue;
    parts.push_back(s.vars[static_cast<size_t>(s.bool_idx[i])].name + " ∈ {" +
                    (p.iv.bools[i] == 2 ? "true" : "false") + "}");
  }
  for (size_t i = 0; i < p.tp.ub.size(); ++i) {
    if (!p.tp.ub[i].is_finite()) continue;
    parts.push_back(s.templates[i].render(s.vars) + " <= " + p.tp.ub[i].q.str());
  }
  if (parts.empty()) return "⊤";
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " ∧ ";
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string render(const AbstractElement& a) {
  const DomainSpec& s = *a.spec;
  if (is_bottom(a)) return "⊥";
  switch (s.kind) {
    case DomainKind::Interval: {
      ProductData p{std::get<IntervalData>(a.data), tp_top(s)};
      return pr_render(s, p);
    }
    case DomainKind::Template: {
      ProductData p{iv_top(s), std::get<TemplateData>(a.data)};
      return pr_render(s, p);
    }
    case DomainKind::Product:
      return pr_render(s, std::get<ProductData>(a.data));
    case DomainKind::Partitioned: {
      const auto& p = std::get<PartitionData>(a.data);
      std::string out;
      for (size_t cell = 0; cell < p.cells.size(); ++cell) {
        if (cell) out += " ; ";
        out += "[" + term_str(cell_formula(s, cell)) + "] { " + pr_render(s, p.cells[cell]) + " }";
      }
      return out;
    }
  }
  return "?";
}

namespace {

std::vector<std::string> split_on(const std::string& text, const std::string& sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t hit = text.find(sep, pos);
    if (hit == std::string::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Bound parse_bound(const std::string& s) {
  if (s == "-inf") return Bound::neg_inf();
  if (s == "+inf") return Bound::pos_inf();
  return Bound::finite(Rational::from_string(s));
}

ProductData pr_parse(const DomainSpec& s, const std::string& text0) {
  std::string text = strip(text0);
  if (text == "⊥") return pr_bottom(s);
  ProductData p = pr_top(s);
  if (text == "⊤") return p;

  std::map<std::string, int> num_pos, bool_pos, tpl_pos;
  for (size_t i = 0; i < s.num_idx.size(); ++i)
    num_pos[s.vars[static_cast<size_t>(s.num_idx[i])].name] = static_cast<int>(i);
  for (size_t i = 0; i < s.bool_idx.size(); ++i)
    bool_pos[s.vars[static_cast<size_t>(s.bool_idx[i])].name] = static_cast<int>(i);
  for (size_t i = 0; i < s.templates.size(); ++i)
    tpl_pos[s.templates[i].render(s.vars)] = static_cast<int>(i);

  for (const std::string& atom0 : split_on(text, " ∧ ")) {
    std::string atom = strip(atom0);
    size_t in_pos = atom.find(" ∈ ");
    if (in_pos != std::string::npos) {
      std::string name = strip(atom.substr(0, in_pos));
      std::string rest = strip(atom.substr(in_pos + std::string(" ∈ ").size()));
      if (!rest.empty() && rest[0] == '[') {
        auto comma = rest.find(", ");
        Bound lo = parse_bound(rest.substr(1, comma - 1));
        Bound hi = parse_bound(rest.substr(comma + 2, rest.size() - comma - 3));
        auto it = num_pos.find(name);
        if (it == num_pos.end()) throw Error("parse_element: unknown variable `" + name + "`");
        p.iv.num[static_cast<size_t>(it->second)] = {lo, hi};
      } else if (!rest.empty() && rest[0] == '{') {
        auto it = bool_pos.find(name);
        if (it == bool_pos.end()) throw Error("parse_element: unknown variable `" + name + "`");
        p.iv.bools[static_cast<size_t>(it->second)] = rest == "{true}" ? 2 : 1;
      } else {
        throw Error("parse_element: bad atom `" + atom + "`");
      }
      continue;
    }
    size_t le_pos = atom.rfind(" <= ");
    if (le_pos == std::string::npos) throw Error("parse_element: bad atom `" + atom + "`");
    std::string lhs = strip(atom.substr(0, le_pos));
    std::string rhs = strip(atom.substr(le_pos + 4));
    auto it = tpl_pos.find(lhs);
    if (it == tpl_pos.end()) throw Error("parse_element: unknown template `" + lhs + "`");
    p.tp.ub[static_cast<size_t>(it->second)] = Bound::finite(Rational::from_string(rhs));
  }
  iv_canon(s, p.iv);
  tp_canon(s, p.tp);
  if (pr_is_bottom(p)) p = pr_bottom(s);
  return p;
}

}  // namespace

AbstractElement parse_element(const DomainSpecPtr& spec, const std::string& text0) {
  const DomainSpec& s = *spec;
  std::string text = strip(text0);
  AbstractElement e;
  e.spec = spec;
  if (text == "⊥") return bottom(spec);

  switch (s.kind) {
    case DomainKind::Interval: {
      ProductData p = pr_parse(s, text);
      e.data = std::move(p.iv);
      return e;
    }
    case DomainKind::Template: {
      ProductData p = pr_parse(s, text);
      e.data = std::move(p.tp);
      return e;
    }
    case DomainKind::Product: {
      e.data = pr_parse(s, text);
      return e;
    }
    case DomainKind::Partitioned: {
      PartitionData p;
      std::vector<std::string> blocks = split_on(text, " ; ");
      size_t ncells = size_t{1} << s.predicates.size();
      if (blocks.size() != ncells) throw Error("parse_element: wrong number of partition blocks");
      for (const std::string& b0 : blocks) {
        std::string b = strip(b0);
        size_t open = b.find("] { ");
        if (b.empty() || b[0] != '[' || open == std::string::npos || b.back() != '}')
          throw Error("parse_element: bad partition block `" + b + "`");
        std::string body = b.substr(open + 4, b.size() - open - 4 - 2);
        p.cells.push_back(pr_parse(s, body));
      }
      e.data = std::move(p);
      return e;
    }
  }
  throw Error("parse_element: unreachable");
}

}  // namespace invstream::dom
