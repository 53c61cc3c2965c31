#include "phicurv/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace phicurv {

PolyRing PolyRing::make(uint32_t p, std::vector<std::string> vars,
                        std::vector<long> weights) {
  if (!fp::is_prime(p)) fail(ErrorCode::BadInput, "p must be prime");
  if (vars.empty()) fail(ErrorCode::BadInput, "need at least one variable");
  PolyRing R;
  R.p = p;
  R.vars = std::move(vars);
  if (weights.empty()) weights.assign(R.vars.size(), 1);
  if (weights.size() != R.vars.size())
    fail(ErrorCode::BadInput, "one weight per variable");
  for (long w : weights)
    if (w <= 0) fail(ErrorCode::BadInput, "weights must be positive");
  R.weights = std::move(weights);
  R.order = MonomialOrder::grevlex(R.nvars());
  return R;
}

bool Poly::operator==(const Poly& o) const {
  if (terms.size() != o.terms.size()) return false;
  for (size_t i = 0; i < terms.size(); ++i)
    if (terms[i].c != o.terms[i].c || terms[i].m != o.terms[i].m) return false;
  return true;
}

Poly poly_zero() { return Poly{}; }

Poly poly_const(const PolyRing& R, uint32_t c) {
  c %= R.p;
  if (c == 0) return {};
  return Poly{{Term{mon_one(R.nvars()), c}}};
}

Poly poly_var(const PolyRing& R, int i) {
  Monomial m = mon_one(R.nvars());
  m[i] = 1;
  return Poly{{Term{std::move(m), 1 % R.p}}};
}

Poly poly_term(const PolyRing& R, Monomial m, uint32_t c) {
  c %= R.p;
  if (c == 0) return {};
  if (static_cast<int>(m.size()) != R.nvars())
    fail(ErrorCode::VariableCountMismatch, "monomial has wrong arity");
  return Poly{{Term{std::move(m), c}}};
}

Poly poly_from_terms(const PolyRing& R, std::vector<Term> ts) {
  std::sort(ts.begin(), ts.end(), [&](const Term& a, const Term& b) {
    return R.order.compare(a.m, b.m) > 0;
  });
  Poly out;
  for (auto& t : ts) {
    uint32_t c = t.c % R.p;
    if (c == 0) continue;
    if (!out.terms.empty() && out.terms.back().m == t.m) {
      out.terms.back().c = fp::add(out.terms.back().c, c, R.p);
      if (out.terms.back().c == 0) out.terms.pop_back();
    } else {
      out.terms.push_back(Term{std::move(t.m), c});
    }
  }
  return out;
}

Poly add(const PolyRing& R, const Poly& f, const Poly& g) {
  Poly out;
  out.terms.reserve(f.terms.size() + g.terms.size());
  size_t i = 0, j = 0;
  while (i < f.terms.size() && j < g.terms.size()) {
    int cmp = R.order.compare(f.terms[i].m, g.terms[j].m);
    if (cmp > 0) {
      out.terms.push_back(f.terms[i++]);
    } else if (cmp < 0) {
      out.terms.push_back(g.terms[j++]);
    } else {
      uint32_t c = fp::add(f.terms[i].c, g.terms[j].c, R.p);
      if (c) out.terms.push_back(Term{f.terms[i].m, c});
      ++i, ++j;
    }
  }
  for (; i < f.terms.size(); ++i) out.terms.push_back(f.terms[i]);
  for (; j < g.terms.size(); ++j) out.terms.push_back(g.terms[j]);
  return out;
}

Poly negate(const PolyRing& R, const Poly& f) {
  Poly out = f;
  for (auto& t : out.terms) t.c = fp::neg(t.c, R.p);
  return out;
}

Poly sub(const PolyRing& R, const Poly& f, const Poly& g) {
  return add(R, f, negate(R, g));
}

Poly scale(const PolyRing& R, const Poly& f, uint32_t c) {
  c %= R.p;
  if (c == 0) return {};
  Poly out = f;
  for (auto& t : out.terms) t.c = fp::mul(t.c, c, R.p);
  return out;
}

Poly mul_term(const PolyRing& R, const Poly& f, const Monomial& m,
              uint32_t c) {
  c %= R.p;
  if (c == 0) return {};
  Poly out;
  out.terms.reserve(f.terms.size());
  for (const auto& t : f.terms)
    out.terms.push_back(Term{mon_mul(t.m, m), fp::mul(t.c, c, R.p)});
  return out;
}

Poly multiply(const PolyRing& R, const Poly& f, const Poly& g) {
  if (!f.terms.empty() && !g.terms.empty() &&
      f.terms[0].m.size() != g.terms[0].m.size())
    fail(ErrorCode::VariableCountMismatch, "multiply: arity mismatch");
  auto cmp = [&](const Monomial& a, const Monomial& b) {
    return R.order.compare(a, b) > 0;  // descending
  };
  std::map<Monomial, uint32_t, decltype(cmp)> acc(cmp);
  for (const auto& s : f.terms)
    for (const auto& t : g.terms) {
      Monomial m = mon_mul(s.m, t.m);
      uint32_t c = fp::mul(s.c, t.c, R.p);
      auto [it, fresh] = acc.emplace(std::move(m), c);
      if (!fresh) it->second = fp::add(it->second, c, R.p);
    }
  Poly out;
  for (auto& [m, c] : acc)
    if (c) out.terms.push_back(Term{m, c});
  return out;
}

Poly poly_pow(const PolyRing& R, const Poly& f, int64_t e) {
  if (e < 0) fail(ErrorCode::BadInput, "negative power");
  Poly result = poly_const(R, 1);
  Poly base = f;
  while (e) {
    if (e & 1) result = multiply(R, result, base);
    e >>= 1;
    if (e) base = multiply(R, base, base);
  }
  return result;
}

Poly substitute(const PolyRing& R, const Poly& f,
                const std::vector<Poly>& images) {
  if (static_cast<int>(images.size()) != R.nvars())
    fail(ErrorCode::VariableCountMismatch, "substitute: one image per variable");
  Poly out;
  for (const auto& t : f.terms) {
    Poly term = poly_const(R, t.c);
    for (int i = 0; i < R.nvars(); ++i)
      if (t.m[i]) term = multiply(R, term, poly_pow(R, images[i], t.m[i]));
    out = add(R, out, term);
  }
  return out;
}

Poly frobenius_apply(const PolyRing& R, const Poly& f, int e) {
  if (e < 0) fail(ErrorCode::BadInput, "frobenius_apply: e must be >= 0");
  int64_t q = 1;
  for (int i = 0; i < e; ++i) {
    q *= R.p;
    if (q >= kExponentCap)
      fail(ErrorCode::ExponentOverflow, "p^e exceeds exponent cap");
  }
  // Coefficients are Frobenius-fixed over a prime field, so f^(p^e) is a
  // pure exponent scaling.
  Poly out;
  out.terms.reserve(f.terms.size());
  for (const auto& t : f.terms) out.terms.push_back(Term{mon_pow(t.m, q), t.c});
  // q-th powers of distinct monomials stay distinct and order is preserved
  // under grevlex scaling, so the term list stays sorted.
  return out;
}

uint32_t constant_coeff(const Poly& f) {
  for (const auto& t : f.terms)
    if (mon_is_one(t.m)) return t.c;
  return 0;
}

std::vector<uint32_t> linear_part(const PolyRing& R, const Poly& f) {
  std::vector<uint32_t> v(R.nvars(), 0);
  for (const auto& t : f.terms) {
    if (total_degree(t.m) != 1) continue;
    for (int i = 0; i < R.nvars(); ++i)
      if (t.m[i] == 1) v[i] = t.c;
  }
  return v;
}

int64_t poly_weighted_degree(const PolyRing& R, const Poly& f) {
  int64_t d = -1;
  for (const auto& t : f.terms)
    d = std::max(d, weighted_degree(t.m, R.weights));
  return d;
}

bool is_homogeneous(const PolyRing& R, const Poly& f) {
  if (f.is_zero()) return true;
  int64_t d = weighted_degree(f.terms[0].m, R.weights);
  for (const auto& t : f.terms)
    if (weighted_degree(t.m, R.weights) != d) return false;
  return true;
}

std::string to_string(const PolyRing& R, const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (size_t i = 0; i < f.terms.size(); ++i) {
    const Term& t = f.terms[i];
    if (i) out += " + ";
    bool has_var = !mon_is_one(t.m);
    bool wrote = false;
    if (t.c != 1 || !has_var) {
      out += std::to_string(t.c);
      wrote = true;
    }
    for (int v = 0; v < R.nvars(); ++v) {
      if (!t.m[v]) continue;
      if (wrote) out += "*";
      out += R.vars[v];
      if (t.m[v] != 1) out += "^" + std::to_string(t.m[v]);
      wrote = true;
    }
  }
  return out;
}

namespace {

struct Parser {
  const PolyRing& R;
  const std::string& s;
  size_t i = 0;

  [[noreturn]] void err(const std::string& msg) {
    fail(ErrorCode::ParseError,
         "parse error at offset " + std::to_string(i) + ": " + msg);
  }

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  uint64_t parse_number() {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      err("expected a number");
    uint64_t n = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      n = n * 10 + (s[i] - '0');
      if (n > (uint64_t(1) << 40)) err("number too large");
      ++i;
    }
    return n;
  }

  int parse_var() {
    skip_ws();
    size_t start = i;
    if (i >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[i])) ||
                           s[i] == '_'))
      return -1;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                            s[i] == '_'))
      ++i;
    std::string name = s.substr(start, i - start);
    for (int v = 0; v < R.nvars(); ++v)
      if (R.vars[v] == name) return v;
    i = start;
    err("unknown variable '" + name + "'");
  }

  // term := [number] factor*   (factors joined by optional '*')
  Term parse_term() {
    Term t{mon_one(R.nvars()), 1 % R.p};
    bool saw_factor = false;
    skip_ws();
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      t.c = static_cast<uint32_t>(parse_number() % R.p);
      saw_factor = true;
    }
    for (;;) {
      size_t before = i;
      bool star = eat('*');
      skip_ws();
      if (i >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[i])) ||
                             s[i] == '_')) {
        if (star) err("expected a variable after '*'");
        i = before;
        break;
      }
      int v = parse_var();
      int64_t e = 1;
      if (eat('^')) e = static_cast<int64_t>(parse_number());
      t.m[v] = checked_exp(int64_t(t.m[v]) + e);
      saw_factor = true;
    }
    if (!saw_factor) err("expected a term");
    return t;
  }

  Poly parse() {
    std::vector<Term> terms;
    skip_ws();
    if (i >= s.size()) err("empty polynomial");
    bool neg = eat('-');
    for (;;) {
      Term t = parse_term();
      if (neg) t.c = fp::neg(t.c, R.p);
      terms.push_back(std::move(t));
      skip_ws();
      if (eat('+')) {
        neg = false;
      } else if (eat('-')) {
        neg = true;
      } else {
        break;
      }
    }
    skip_ws();
    if (i != s.size()) err("trailing input");
    return poly_from_terms(R, std::move(terms));
  }
};

}  // namespace

Poly parse_poly(const PolyRing& R, const std::string& text) {
  Parser p{R, text};
  return p.parse();
}

}  // namespace phicurv
