#include "cstab/ypattern.hpp"

#include <algorithm>
#include <sstream>

namespace cstab {

Poly Poly::constant(Int c) {
  Poly p;
  if (c != 0) p.terms[{0, 0, 0}] = std::move(c);
  return p;
}

Poly Poly::variable(int i) {
  Poly p;
  Mono m{0, 0, 0};
  m[i] = 1;
  p.terms[m] = 1;
  return p;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) {
    Int& slot = out.terms[m];
    slot += c;
    if (slot == 0) out.terms.erase(m);
  }
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) {
    Int& slot = out.terms[m];
    slot -= c;
    if (slot == 0) out.terms.erase(m);
  }
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      Int& slot = out.terms[m];
      slot += ca * cb;
      if (slot == 0) out.terms.erase(m);
    }
  return out;
}

std::string Poly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (!first) os << (c > 0 ? "+" : "");
    os << c;
    for (int i = 0; i < kOracleMaxRank; ++i)
      if (m[i] != 0) os << "*x" << i << "^" << m[i];
    first = false;
  }
  return os.str();
}

namespace {

int topVariable(const Poly& p) {
  int top = -1;
  for (const auto& [m, c] : p.terms)
    for (int i = 0; i < kOracleMaxRank; ++i)
      if (m[i] > 0) top = std::max(top, i);
  return top;
}

int degIn(const Poly& p, int v) {
  int d = 0;
  for (const auto& [m, c] : p.terms) d = std::max(d, m[v]);
  return d;
}

// Coefficients of p viewed as a univariate polynomial in variable v.
std::vector<Poly> coeffsIn(const Poly& p, int v) {
  std::vector<Poly> out(degIn(p, v) + 1);
  for (const auto& [m, c] : p.terms) {
    Mono r = m;
    int d = r[v];
    r[v] = 0;
    out[d].terms[r] = c;
  }
  return out;
}


Int intGcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Poly scale(const Poly& p, const Int& c) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [m, k] : p.terms) out.terms[m] = k * c;
  return out;
}

}  // namespace

Poly polyDivExact(const Poly& a, const Poly& b) {
  if (b.isZero()) throw std::domain_error("polyDivExact: division by zero");
  Poly rem = a, quot;
  // Divide by the leading term (w.r.t. the map's monomial order) repeatedly.
  auto leading = [](const Poly& p) { return std::prev(p.terms.end()); };
  while (!rem.isZero()) {
    auto lr = leading(rem);
    auto lb = leading(b);
    Mono m;
    for (int i = 0; i < kOracleMaxRank; ++i) {
      m[i] = lr->first[i] - lb->first[i];
      if (m[i] < 0) throw std::domain_error("polyDivExact: not divisible (monomial)");
    }
    if (lr->second % lb->second != 0)
      throw std::domain_error("polyDivExact: not divisible (coefficient)");
    Poly t;
    t.terms[m] = lr->second / lb->second;
    quot = quot + t;
    rem = rem - t * b;
  }
  return quot;
}

namespace {

// Content (gcd of univariate coefficients, recursing into fewer variables)
// and primitive part with respect to variable v.
Poly contentIn(const Poly& p, int v) {
  Poly g;
  for (const auto& c : coeffsIn(p, v)) {
    if (c.isZero()) continue;
    g = g.isZero() ? c : polyGcd(g, c);
  }
  return g;
}

// Pseudo-remainder of a by b in variable v.
Poly prem(Poly a, const Poly& b, int v) {
  int db = degIn(b, v);
  auto bc = coeffsIn(b, v);
  const Poly& lb = bc[db];
  while (!a.isZero() && degIn(a, v) >= db) {
    int da = degIn(a, v);
    auto ac = coeffsIn(a, v);
    const Poly& la = ac[da];
    // a <- lb * a - la * x^(da-db) * b
    Poly shift;
    Mono m{0, 0, 0};
    m[v] = da - db;
    shift.terms[m] = 1;
    a = lb * a - la * shift * b;
  }
  return a;
}

Int polyContentZ(const Poly& p) {
  Int g = 0;
  for (const auto& [m, c] : p.terms) g = intGcd(g, c);
  return g;
}

Poly normalizeSign(const Poly& p) {
  if (p.isZero()) return p;
  if (std::prev(p.terms.end())->second < 0) return scale(p, Int(-1));
  return p;
}

}  // namespace

Poly polyGcd(Poly a, Poly b) {
  if (a.isZero()) return normalizeSign(b);
  if (b.isZero()) return normalizeSign(a);
  int v = std::max(topVariable(a), topVariable(b));
  if (v < 0) {
    // Integer constants.
    return Poly::constant(intGcd(a.terms.begin()->second, b.terms.begin()->second));
  }
  Poly ca = contentIn(a, v), cb = contentIn(b, v);
  Poly ppa = polyDivExact(a, ca), ppb = polyDivExact(b, cb);
  Poly c = polyGcd(ca, cb);
  if (degIn(ppa, v) < degIn(ppb, v)) std::swap(ppa, ppb);
  // Primitive pseudo-remainder sequence.
  while (!ppb.isZero()) {
    Poly r = prem(ppa, ppb, v);
    ppa = ppb;
    if (r.isZero()) {
      ppb = r;
    } else {
      Poly cr = contentIn(r, v);
      ppb = polyDivExact(r, cr);
    }
  }
  Poly g = ppa;
  Int zc = polyContentZ(g);
  if (zc > 1) g = polyDivExact(g, Poly::constant(zc));
  return normalizeSign(c * g);
}

RatFun RatFun::variable(int i) { return {Poly::variable(i), Poly::constant(1)}; }
RatFun RatFun::one() { return {Poly::constant(1), Poly::constant(1)}; }

RatFun RatFun::reduced() const {
  if (num.isZero()) return {Poly(), Poly::constant(1)};
  Poly g = polyGcd(num, den);
  Poly n = polyDivExact(num, g), d = polyDivExact(den, g);
  if (std::prev(d.terms.end())->second < 0) {
    n = Poly::constant(-1) * n;
    d = Poly::constant(-1) * d;
  }
  return {n, d};
}

RatFun RatFun::inverse() const {
  if (num.isZero()) throw std::domain_error("RatFun: inverse of zero");
  return RatFun{den, num}.reduced();
}

RatFun operator*(const RatFun& a, const RatFun& b) {
  return RatFun{a.num * b.num, a.den * b.den}.reduced();
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  return RatFun{a.num * b.den + b.num * a.den, a.den * b.den}.reduced();
}

bool operator==(const RatFun& a, const RatFun& b) {
  // Cross multiplication; independent of reduction.
  return a.num * b.den == b.num * a.den;
}

std::string RatFun::str() const { return num.str() + "/" + den.str(); }

YState initialYState(const ExchangeMatrix& B0) {
  if (B0.n > kOracleMaxRank) throw std::invalid_argument("oracle: rank too large");
  YState s{B0, {}};
  for (int i = 0; i < B0.n; ++i) s.y.push_back(RatFun::variable(i));
  return s;
}

YState mutateYState(const YState& s, int k) {
  int n = s.B.n;
  if (k < 0 || k >= n) throw std::out_of_range("mutateYState: index out of range");
  YState out{mutateExchangeMatrix(s.B, k), std::vector<RatFun>(n)};
  // y_j (1 + y_k)^{v} for v >= 0, y_j (1 + y_k^{-1})^{v} for v < 0.
  RatFun growBase = RatFun::one() + s.y[k];
  RatFun shrinkBase = (RatFun::one() + s.y[k].inverse()).inverse();
  for (int j = 0; j < n; ++j) {
    if (j == k) {
      out.y[j] = s.y[k].inverse();
      continue;
    }
    long long v = s.B.v(k, j);
    RatFun f = s.y[j];
    const RatFun& base = v >= 0 ? growBase : shrinkBase;
    for (long long e = 0; e < std::llabs(v); ++e) f = f * base;
    out.y[j] = f;
  }
  return out;
}

std::vector<RatFun> oracleYPattern(const ExchangeMatrix& B0, const std::vector<int>& word) {
  YState s = initialYState(B0);
  for (int k : word) s = mutateYState(s, k);
  return s.y;
}

std::string yTupleKey(const std::vector<RatFun>& y) {
  std::vector<std::string> parts;
  for (const auto& f : y) parts.push_back(f.reduced().str());
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) {
    out += p;
    out += '|';
  }
  return out;
}

std::vector<std::string> validateSeedIdentity(const ExchangeGraph& E) {
  std::vector<std::string> issues;
  if (E.n > kOracleMaxRank) {
    issues.push_back("rank too large for oracle");
    return issues;
  }
  int V = E.vertexCount();
  int n = E.n;
  // Oracle states are kept in each vertex's stored label positions, so a
  // crossing relabels the mutated state by the edge bijection.
  auto crossState = [&](const YState& st, int s, int k) {
    const GraphEdge& e = E.edges[E.adj[s][k]];
    YState raw = mutateYState(st, k);
    YState out{ExchangeMatrix{n, IMat(n, n)}, std::vector<RatFun>(n, RatFun::one())};
    for (int j = 0; j < n; ++j) {
      out.y[e.rho[j]] = raw.y[j];
      for (int l = 0; l < n; ++l) out.B.v(e.rho[j], e.rho[l]) = raw.B.v(j, l);
    }
    return out;
  };
  std::vector<YState> states(V, YState{{}, {}});
  std::vector<bool> have(V, false);
  states[E.base] = initialYState(E.exchangeMatrixAt(E.base));
  have[E.base] = true;
  std::deque<int> queue{E.base};
  std::vector<std::string> keys(V);
  keys[E.base] = yTupleKey(states[E.base].y);
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int k = 0; k < n; ++k) {
      int t = E.edges[E.adj[s][k]].dst;
      if (have[t]) continue;
      states[t] = crossState(states[s], s, k);
      keys[t] = yTupleKey(states[t].y);
      have[t] = true;
      queue.push_back(t);
    }
  }
  for (int s = 0; s < V; ++s)
    if (!(states[s].B.v == E.seeds[s].B))
      issues.push_back("vertex " + std::to_string(s) +
                       ": oracle exchange matrix disagrees with the stored seed");
  for (int s = 0; s < V; ++s)
    for (int t = s + 1; t < V; ++t)
      if (keys[s] == keys[t])
        issues.push_back("vertices " + std::to_string(s) + " and " + std::to_string(t) +
                         " have equal Y-tuples but were not merged");
  for (int s = 0; s < V; ++s)
    for (int k = 0; k < n; ++k) {
      int t = E.edges[E.adj[s][k]].dst;
      YState step = crossState(states[s], s, k);
      if (yTupleKey(step.y) != keys[t])
        issues.push_back("edge (" + std::to_string(s) + "," + std::to_string(k) +
                         "): merged with vertex " + std::to_string(t) +
                         " but oracle Y-tuples disagree");
    }
  return issues;
}

}  // namespace cstab
