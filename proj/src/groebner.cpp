#include "phicurv/groebner.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace phicurv {

int svec_term_compare(const MonomialOrder& order, const VTerm& a,
                      const VTerm& b) {
  if (a.pos != b.pos) return a.pos < b.pos ? 1 : -1;  // e_0 > e_1 > ...
  return order.compare(a.m, b.m);
}

SVec svec_sorted(const PolyRing& R, SVec v) {
  std::sort(v.begin(), v.end(), [&](const VTerm& a, const VTerm& b) {
    return svec_term_compare(R.order, a, b) > 0;
  });
  SVec out;
  out.reserve(v.size());
  for (auto& t : v) {
    uint32_t c = t.c % R.p;
    if (!c) continue;
    if (!out.empty() && out.back().pos == t.pos && out.back().m == t.m) {
      out.back().c = fp::add(out.back().c, c, R.p);
      if (!out.back().c) out.pop_back();
    } else {
      out.push_back(VTerm{std::move(t.m), t.pos, c});
    }
  }
  return out;
}

SVec svec_add(const PolyRing& R, const SVec& a, const SVec& b) {
  SVec out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int cmp = svec_term_compare(R.order, a[i], b[j]);
    if (cmp > 0) {
      out.push_back(a[i++]);
    } else if (cmp < 0) {
      out.push_back(b[j++]);
    } else {
      uint32_t c = fp::add(a[i].c, b[j].c, R.p);
      if (c) out.push_back(VTerm{a[i].m, a[i].pos, c});
      ++i, ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

SVec svec_scale(const PolyRing& R, const SVec& v, uint32_t c) {
  c %= R.p;
  if (!c) return {};
  SVec out = v;
  for (auto& t : out) t.c = fp::mul(t.c, c, R.p);
  return out;
}

SVec svec_mul_term(const PolyRing& R, const SVec& v, const Monomial& m,
                   uint32_t c) {
  c %= R.p;
  if (!c) return {};
  SVec out;
  out.reserve(v.size());
  for (const auto& t : v)
    out.push_back(VTerm{mon_mul(t.m, m), t.pos, fp::mul(t.c, c, R.p)});
  return out;  // multiplying by a monomial preserves the sort order
}

SVec svec_mul_poly(const PolyRing& R, const SVec& v, const Poly& f) {
  SVec acc;
  for (const auto& t : f.terms)
    acc = svec_add(R, acc, svec_mul_term(R, v, t.m, t.c));
  return acc;
}

SVec svec_from_vector(const PolyRing& R, const FreeModuleVector& v) {
  SVec out;
  for (int pos = 0; pos < v.rank; ++pos)
    for (const auto& t : v.comps[pos].terms)
      out.push_back(VTerm{t.m, pos, t.c});
  return svec_sorted(R, std::move(out));
}

FreeModuleVector svec_to_vector(const SVec& v, int rank) {
  FreeModuleVector out;
  out.rank = rank;
  out.comps.resize(rank);
  for (const auto& t : v) out.comps[t.pos].terms.push_back(Term{t.m, t.c});
  return out;  // per-component descending order is inherited
}

SVec svec_from_poly(const PolyRing& R, const Poly& f, int pos) {
  (void)R;
  SVec out;
  out.reserve(f.terms.size());
  for (const auto& t : f.terms) out.push_back(VTerm{t.m, pos, t.c});
  return out;
}

Poly svec_component(const PolyRing& R, const SVec& v, int pos) {
  (void)R;
  Poly f;
  for (const auto& t : v)
    if (t.pos == pos) f.terms.push_back(Term{t.m, t.c});
  return f;
}

namespace {

// Divisor lookup + full normal form against a fixed list of monic vectors.
struct Reducer {
  const PolyRing& R;
  std::vector<SVec> gens;
  std::map<int, std::vector<int>> by_pos;

  explicit Reducer(const PolyRing& R) : R(R) {}

  void add(SVec g) {
    int n = static_cast<int>(gens.size());
    by_pos[g.front().pos].push_back(n);
    gens.push_back(std::move(g));
  }

  int find(const VTerm& t) const {
    auto it = by_pos.find(t.pos);
    if (it == by_pos.end()) return -1;
    for (int g : it->second)
      if (mon_divides(gens[g].front().m, t.m)) return g;
    return -1;
  }

  SVec reduce(SVec cur, SVec* quot = nullptr) const {
    SVec rem;
    size_t k = 0;
    while (k < cur.size()) {
      const VTerm& t = cur[k];
      int g = find(t);
      if (g < 0) {
        rem.push_back(t);
        ++k;
        continue;
      }
      Monomial q = mon_div(t.m, gens[g].front().m);
      uint32_t c = t.c;  // generators are monic
      if (quot) *quot = svec_add(R, *quot, SVec{VTerm{q, g, c}});
      SVec sub = svec_mul_term(R, gens[g], q, fp::neg(c, R.p));
      SVec tail(cur.begin() + k, cur.end());
      SVec merged = svec_add(R, tail, sub);
      cur.resize(k);
      cur.insert(cur.end(), merged.begin(), merged.end());
    }
    return rem;
  }
};

// Working basis element: monic vector plus (when tracking) its expression
// over the original input columns.
struct BasisElt {
  SVec v;
  SVec rep;
};

struct Pair {
  int i, j;
  Monomial lcm;
  int pos;
};

// normal strategy: smallest lcm first, ties by position then (i, j)
struct PairLater {
  const MonomialOrder* order;
  bool operator()(const Pair& a, const Pair& b) const {
    int cmp = order->compare(a.lcm, b.lcm);
    if (cmp) return cmp > 0;
    if (a.pos != b.pos) return a.pos > b.pos;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

struct Engine {
  const PolyRing& R;
  bool track;
  int rank = 1;
  std::vector<BasisElt> basis;
  // leading-term index: position -> list of basis indices
  std::map<int, std::vector<int>> by_pos;
  std::priority_queue<Pair, std::vector<Pair>, PairLater> pending;
  std::vector<SVec> syz;  // Schreyer syzygies in basis-index space

  Engine(const PolyRing& R, bool track, int rank = 1)
      : R(R),
        track(track),
        rank(rank),
        pending(PairLater{&R.order}) {}

  const VTerm& lt(int i) const { return basis[i].v.front(); }

  int find_reducer(const VTerm& t) const {
    auto it = by_pos.find(t.pos);
    if (it == by_pos.end()) return -1;
    for (int g : it->second)
      if (mon_divides(lt(g).m, t.m)) return g;
    return -1;
  }

  // Full normal form; when `quot` is non-null, records the quotient terms
  // against each basis element (basis elements are monic).
  SVec reduce(SVec cur, SVec* quot) const {
    SVec rem;
    size_t k = 0;
    while (k < cur.size()) {
      const VTerm& t = cur[k];
      int g = find_reducer(t);
      if (g < 0) {
        rem.push_back(t);
        ++k;
        continue;
      }
      Monomial q = mon_div(t.m, lt(g).m);
      uint32_t c = t.c;  // lc(g) == 1
      if (quot) *quot = svec_add(R, *quot, SVec{VTerm{q, g, c}});
      SVec sub = svec_mul_term(R, basis[g].v, q, fp::neg(c, R.p));
      SVec tail(cur.begin() + k, cur.end());
      SVec merged = svec_add(R, tail, sub);
      cur.resize(k);
      cur.insert(cur.end(), merged.begin(), merged.end());
    }
    return rem;
  }

  void add_pairs_for(int n) {
    int pos = lt(n).pos;
    auto it = by_pos.find(pos);
    if (it == by_pos.end()) return;
    for (int i : it->second) {
      if (i == n) continue;
      pending.push(Pair{i, n, mon_lcm(lt(i).m, lt(n).m), pos});
    }
  }

  int insert(SVec v, SVec rep) {
    uint32_t lc = v.front().c;
    if (lc != 1) {
      uint32_t s = fp::inv(lc, R.p);
      v = svec_scale(R, v, s);
      rep = svec_scale(R, rep, s);
    }
    int n = static_cast<int>(basis.size());
    basis.push_back(BasisElt{std::move(v), std::move(rep)});
    add_pairs_for(n);
    by_pos[lt(n).pos].push_back(n);
    return n;
  }

  void run(const std::vector<SVec>& inputs) {
    for (size_t j = 0; j < inputs.size(); ++j) {
      if (inputs[j].empty()) continue;  // zero columns handled by the caller
      SVec rep;
      if (track) rep = SVec{VTerm{mon_one(R.nvars()), static_cast<int>(j), 1}};
      insert(inputs[j], std::move(rep));
    }
    complete();
  }

  void complete() {
    while (!pending.empty()) {
      Pair pr = pending.top();
      pending.pop();
      // Product criterion, valid in the rank-1 (ideal) case only.
      if (!track && rank == 1 &&
          pr.lcm == mon_mul(lt(pr.i).m, lt(pr.j).m))
        continue;
      Monomial qi = mon_div(pr.lcm, lt(pr.i).m);
      Monomial qj = mon_div(pr.lcm, lt(pr.j).m);
      SVec sp = svec_add(R, svec_mul_term(R, basis[pr.i].v, qi, 1),
                         svec_mul_term(R, basis[pr.j].v, qj, R.p - 1));
      SVec quot;
      SVec rem = reduce(std::move(sp), track ? &quot : nullptr);
      if (track) {
        // S-pair relation: qi*e_i - qj*e_j - quot - (rem ? e_new) = 0.
        SVec s = svec_add(R, SVec{VTerm{qi, pr.i, 1}},
                          SVec{VTerm{qj, pr.j, R.p - 1}});
        s = svec_add(R, s, svec_scale(R, quot, R.p - 1));
        if (!rem.empty()) {
          uint32_t lc = rem.front().c;
          int n = insert(std::move(rem), {});
          // rep of the new element from the relation itself
          SVec rep;
          for (const auto& t : s) {
            SVec piece = svec_mul_term(R, basis[t.pos].rep, t.m, t.c);
            rep = svec_add(R, rep, piece);
          }
          basis[n].rep = svec_scale(R, rep, fp::inv(lc, R.p));
          s = svec_add(R, s, SVec{VTerm{mon_one(R.nvars()), n,
                                        fp::neg(lc, R.p)}});
          // s is now a genuine syzygy of the (enlarged) basis
          syz.push_back(std::move(s));
        } else {
          syz.push_back(std::move(s));
        }
      } else {
        if (!rem.empty()) insert(std::move(rem), {});
      }
    }
  }
};

// Interreduction to the unique reduced basis: drop redundant leading terms,
// tail-reduce, sort descending by leading term.
std::vector<SVec> interreduce(const PolyRing& R, std::vector<SVec> gens) {
  // minimalize: keep only generators whose leading term no other divides
  std::vector<SVec> kept;
  for (size_t i = 0; i < gens.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < gens.size() && !redundant; ++j) {
      if (i == j) continue;
      const VTerm &a = gens[j].front(), &b = gens[i].front();
      if (a.pos != b.pos || !mon_divides(a.m, b.m)) continue;
      // equal leading terms: keep the first occurrence
      if (a.m == b.m && j > i) continue;
      redundant = true;
    }
    if (!redundant) kept.push_back(gens[i]);
  }
  // Tail-reduce until stable. Leading terms are pairwise non-divisible, so
  // no tail term can be divisible by its own leading term.
  bool changed = true;
  while (changed) {
    changed = false;
    Reducer red(R);
    for (const auto& g : kept) red.add(g);
    for (size_t i = 0; i < kept.size(); ++i) {
      SVec tail(kept[i].begin() + 1, kept[i].end());
      SVec rtail = red.reduce(tail);
      if (!(rtail == tail)) {
        SVec next{kept[i].front()};
        next.insert(next.end(), rtail.begin(), rtail.end());
        kept[i] = std::move(next);
        red.gens[i] = kept[i];
        changed = true;
      }
    }
  }
  std::sort(kept.begin(), kept.end(), [&](const SVec& a, const SVec& b) {
    return svec_term_compare(R.order, a.front(), b.front()) > 0;
  });
  return kept;
}

}  // namespace

struct IncrementalGB::Impl {
  Engine eng;
  Impl(const PolyRing& R, int rank) : eng(R, false, rank) {}
};

IncrementalGB::IncrementalGB(const PolyRing& R, int rank)
    : impl_(std::make_unique<Impl>(R, rank)) {}
IncrementalGB::~IncrementalGB() = default;
IncrementalGB::IncrementalGB(IncrementalGB&&) noexcept = default;

void IncrementalGB::add(const SVec& v) {
  SVec r = impl_->eng.reduce(v, nullptr);
  if (r.empty()) return;
  impl_->eng.insert(std::move(r), {});
  impl_->eng.complete();
}

SVec IncrementalGB::reduce(const SVec& v) const {
  return impl_->eng.reduce(v, nullptr);
}

GroebnerBasis buchberger(const PolyRing& R, const std::vector<SVec>& gens,
                         int rank) {
  Engine eng(R, false, rank);
  eng.run(gens);
  std::vector<SVec> raw;
  raw.reserve(eng.basis.size());
  for (auto& b : eng.basis) raw.push_back(std::move(b.v));
  GroebnerBasis G;
  G.rank = rank;
  G.order = R.order;
  G.gens = interreduce(R, std::move(raw));
  G.reduced = true;
  return G;
}

SVec normal_form(const PolyRing& R, const SVec& v, const GroebnerBasis& G) {
  return NormalFormer(R, G).reduce(v);
}

struct NormalFormer::Impl {
  Reducer red;
  explicit Impl(const PolyRing& R) : red(R) {}
};

NormalFormer::NormalFormer(const PolyRing& R, const GroebnerBasis& G)
    : impl_(std::make_unique<Impl>(R)) {
  for (const auto& g : G.gens) {
    if (g.empty()) continue;
    uint32_t lc = g.front().c;
    impl_->red.add(lc == 1 ? g : svec_scale(R, g, fp::inv(lc, R.p)));
  }
}
NormalFormer::~NormalFormer() = default;
NormalFormer::NormalFormer(NormalFormer&&) noexcept = default;

SVec NormalFormer::reduce(const SVec& v) const { return impl_->red.reduce(v); }

std::vector<SVec> syzygies(const PolyRing& R, const std::vector<SVec>& gens,
                           int rank) {
  Engine eng(R, true, rank);
  eng.run(gens);
  std::vector<SVec> out;
  // zero input columns are syzygies outright
  for (size_t j = 0; j < gens.size(); ++j)
    if (gens[j].empty())
      out.push_back(SVec{VTerm{mon_one(R.nvars()), static_cast<int>(j), 1}});
  for (const auto& s : eng.syz) {
    SVec img;
    for (const auto& t : s)
      img = svec_add(R, img, svec_mul_term(R, eng.basis[t.pos].rep, t.m, t.c));
    if (!img.empty()) out.push_back(std::move(img));
  }
  return out;
}

LengthResult length_of_quotient(const PolyRing& R, const GroebnerBasis& G,
                                int rank) {
  const int n = R.nvars();
  std::vector<std::vector<Monomial>> lts(rank);
  for (const auto& g : G.gens)
    if (!g.empty()) lts[g.front().pos].push_back(g.front().m);
  uint64_t total = 0;
  for (int pos = 0; pos < rank; ++pos) {
    // caps from pure powers
    std::vector<int64_t> cap(n, -1);
    for (const auto& m : lts[pos]) {
      int support = -1;
      bool pure = true;
      for (int i = 0; i < n; ++i) {
        if (m[i] == 0) continue;
        if (support >= 0) {
          pure = false;
          break;
        }
        support = i;
      }
      if (mon_is_one(m)) {
        for (int i = 0; i < n; ++i) cap[i] = 0;
        break;
      }
      if (pure && support >= 0)
        cap[support] = cap[support] < 0 ? m[support]
                                        : std::min<int64_t>(cap[support],
                                                            m[support]);
    }
    bool pos_finite = true;
    for (int i = 0; i < n; ++i)
      if (cap[i] < 0) pos_finite = false;
    if (!pos_finite) return LengthResult{false, 0};
    // enumerate the box, skipping multiples of leading terms
    Monomial cur = mon_one(n);
    uint64_t count = 0;
    // iterative odometer
    for (;;) {
      bool standard = true;
      for (const auto& m : lts[pos])
        if (mon_divides(m, cur)) {
          standard = false;
          break;
        }
      if (standard) ++count;
      int i = 0;
      while (i < n) {
        if (++cur[i] < cap[i]) break;
        cur[i] = 0;
        ++i;
      }
      if (i == n) break;
    }
    total += count;
  }
  return LengthResult{true, total};
}

std::vector<std::pair<Monomial, int>> standard_monomials(
    const PolyRing& R, const GroebnerBasis& G, int rank) {
  const int n = R.nvars();
  std::vector<std::vector<Monomial>> lts(rank);
  for (const auto& g : G.gens)
    if (!g.empty()) lts[g.front().pos].push_back(g.front().m);
  std::vector<std::pair<Monomial, int>> out;
  for (int pos = 0; pos < rank; ++pos) {
    std::vector<int64_t> cap(n, -1);
    bool killed = false;
    for (const auto& m : lts[pos]) {
      if (mon_is_one(m)) {
        killed = true;
        break;
      }
      int support = -1;
      bool pure = true;
      for (int i = 0; i < n; ++i) {
        if (m[i] == 0) continue;
        if (support >= 0) {
          pure = false;
          break;
        }
        support = i;
      }
      if (pure && support >= 0)
        cap[support] = cap[support] < 0 ? m[support]
                                        : std::min<int64_t>(cap[support],
                                                            m[support]);
    }
    if (killed) continue;
    for (int i = 0; i < n; ++i)
      if (cap[i] < 0)
        fail(ErrorCode::BadInput, "standard_monomials: infinite quotient");
    std::vector<Monomial> found;
    Monomial cur = mon_one(n);
    for (;;) {
      bool standard = true;
      for (const auto& m : lts[pos])
        if (mon_divides(m, cur)) {
          standard = false;
          break;
        }
      if (standard) found.push_back(cur);
      int i = 0;
      while (i < n) {
        if (++cur[i] < cap[i]) break;
        cur[i] = 0;
        ++i;
      }
      if (i == n) break;
    }
    std::sort(found.begin(), found.end(),
              [&](const Monomial& a, const Monomial& b) {
                return R.order.compare(a, b) < 0;
              });
    for (auto& m : found) out.emplace_back(std::move(m), pos);
  }
  return out;
}

}  // namespace phicurv
