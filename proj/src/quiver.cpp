#include "cstab/quiver.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace cstab {

bool ExchangeMatrix::skewSymmetric() const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (v(i, j) != -v(j, i)) return false;
  return true;
}

ExchangeMatrix mutateExchangeMatrix(const ExchangeMatrix& B, int k) {
  if (k < 0 || k >= B.n) throw std::out_of_range("mutateExchangeMatrix: index out of range");
  ExchangeMatrix out{B.n, IMat(B.n, B.n)};
  for (int j = 0; j < B.n; ++j)
    for (int l = 0; l < B.n; ++l) {
      if (j == k || l == k) {
        out.v(j, l) = -B.v(j, l);
      } else {
        long long a = B.v(j, k), b = B.v(k, l);
        if (a >= 0 && b >= 0)
          out.v(j, l) = B.v(j, l) + a * b;
        else if (a <= 0 && b <= 0)
          out.v(j, l) = B.v(j, l) - a * b;
        else
          out.v(j, l) = B.v(j, l);
      }
    }
  return out;
}

namespace {

template <class V, class S>
V tropicalEdgeImpl(const ExchangeMatrix& B, int k, const V& w, S zero) {
  if (k < 0 || k >= B.n) throw std::out_of_range("tropicalEdgeMap: index out of range");
  V out(B.n, zero);
  for (int j = 0; j < B.n; ++j) {
    if (j == k) {
      out[j] = -w[k];
    } else {
      long long vkj = B.v(k, j);
      S bump = vkj >= 0 ? std::max(zero, w[k]) : std::max(zero, S(-w[k]));
      out[j] = w[j] + vkj * bump;
    }
  }
  return out;
}

}  // namespace

RatVec tropicalEdgeMap(const ExchangeMatrix& B, int k, const RatVec& w) {
  return tropicalEdgeImpl(B, k, w, Rat(0));
}

IVec tropicalEdgeMap(const ExchangeMatrix& B, int k, const IVec& w) {
  return tropicalEdgeImpl(B, k, w, 0LL);
}

ExchangeMatrix namedQuiver(const std::string& name) {
  auto chain = [](int n) {
    ExchangeMatrix B{n, IMat(n, n)};
    for (int i = 0; i + 1 < n; ++i) {
      B.v(i, i + 1) = 1;
      B.v(i + 1, i) = -1;
    }
    return B;
  };
  if (name == "a1") return chain(1);
  if (name == "a2") return chain(2);
  if (name == "a3") return chain(3);
  if (name == "a4") return chain(4);
  if (name == "a1xa1") return ExchangeMatrix{2, IMat(2, 2)};
  if (name == "d4") {
    ExchangeMatrix B{4, IMat(4, 4)};
    for (int j = 1; j < 4; ++j) {
      B.v(0, j) = 1;
      B.v(j, 0) = -1;
    }
    return B;
  }
  throw std::invalid_argument("unknown quiver name: " + name);
}

namespace {

Seed applyPerm(const Seed& s, const std::vector<int>& p) {
  int n = s.B.rows;
  Seed out{IMat(n, n), IMat(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.B(p[i], p[j]) = s.B(i, j);
      out.G(p[i], j) = s.G(i, j);
    }
  return out;
}

bool seedLess(const Seed& a, const Seed& b) {
  if (a.B.a != b.B.a) return a.B.a < b.B.a;
  return a.G.a < b.G.a;
}

}  // namespace

Seed canonicalSeed(const Seed& s, std::vector<int>* perm) {
  int n = s.B.rows;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Seed best = s;
  std::vector<int> bestPerm = p;
  while (std::next_permutation(p.begin(), p.end())) {
    Seed cand = applyPerm(s, p);
    if (seedLess(cand, best)) {
      best = cand;
      bestPerm = p;
    }
  }
  if (perm) *perm = bestPerm;
  return best;
}

std::string seedKey(const Seed& s) {
  std::ostringstream os;
  for (auto x : s.B.a) os << x << ',';
  os << ';';
  for (auto x : s.G.a) os << x << ',';
  return os.str();
}

RatVec ExchangeGraph::crossEdge(int edgeId, const RatVec& w) const {
  const GraphEdge& e = edges[edgeId];
  RatVec raw = tropicalEdgeMap(exchangeMatrixAt(e.src), e.k, w);
  RatVec out(n);
  for (int j = 0; j < n; ++j) out[e.rho[j]] = raw[j];
  return out;
}

IVec ExchangeGraph::crossEdge(int edgeId, const IVec& w) const {
  const GraphEdge& e = edges[edgeId];
  IVec raw = tropicalEdgeMap(exchangeMatrixAt(e.src), e.k, w);
  IVec out(n);
  for (int j = 0; j < n; ++j) out[e.rho[j]] = raw[j];
  return out;
}

std::vector<int> ExchangeGraph::path(int s1, int s2) const {
  std::vector<int> up, down;
  int a = s1, b = s2;
  auto chainToBase = [&](int v, std::vector<int>& out) {
    while (v != base) {
      int e = parentEdge[v];
      out.push_back(e);
      v = edges[e].src;
    }
  };
  chainToBase(a, up);    // edges pointing toward v; reversed below
  chainToBase(b, down);  // base -> s2 after reversal
  // Trim the common tail through the base so the path stays short.
  while (!up.empty() && !down.empty() && up.back() == down.back()) {
    up.pop_back();
    down.pop_back();
  }
  std::vector<int> out;
  for (int e : up) out.push_back(eps[e]);  // descend from s1 toward the junction
  for (auto it = down.rbegin(); it != down.rend(); ++it) out.push_back(*it);
  return out;
}

RatVec ExchangeGraph::tropicalTransition(int s1, int s2, const RatVec& w) const {
  RatVec cur = w;
  for (int e : path(s1, s2)) cur = crossEdge(e, cur);
  return cur;
}

IVec ExchangeGraph::tropicalTransition(int s1, int s2, const IVec& w) const {
  IVec cur = w;
  for (int e : path(s1, s2)) cur = crossEdge(e, cur);
  return cur;
}

ExchangeGraph enumerateExchangeGraph(const ExchangeMatrix& B0, size_t cap) {
  if (!B0.skewSymmetric()) throw std::invalid_argument("enumerate: B0 must be skew-symmetric");
  if (cap < 1) throw std::invalid_argument("enumerate: cap must be >= 1");
  int n = B0.n;
  ExchangeGraph E;
  E.n = n;

  Seed start{B0.v, IMat::identity(n)};
  Seed canon = canonicalSeed(start);
  std::map<std::string, int> known;
  known[seedKey(canon)] = 0;
  E.seeds.push_back(canon);
  E.adj.push_back(std::vector<int>(n, -1));
  E.parentEdge.push_back(-1);

  std::deque<int> queue{0};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int k = 0; k < n; ++k) {
      if (E.adj[s][k] >= 0) continue;
      const Seed& cur = E.seeds[s];
      ExchangeMatrix Bs{n, cur.B};
      Seed raw{mutateExchangeMatrix(Bs, k).v, IMat(n, n)};
      for (int c = 0; c < n; ++c) raw.G.setCol(c, tropicalEdgeMap(Bs, k, cur.G.col(c)));
      std::vector<int> perm;
      Seed canonT = canonicalSeed(raw, &perm);
      std::string key = seedKey(canonT);
      auto it = known.find(key);
      int t;
      bool fresh = false;
      if (it == known.end()) {
        t = static_cast<int>(E.seeds.size());
        if (static_cast<size_t>(t) + 1 > cap) throw CapExceeded(cap);
        known[key] = t;
        E.seeds.push_back(canonT);
        E.adj.push_back(std::vector<int>(n, -1));
        E.parentEdge.push_back(-1);
        fresh = true;
      } else {
        t = it->second;
      }
      int eFwd = static_cast<int>(E.edges.size());
      int eRev = eFwd + 1;
      std::vector<int> rhoInv(n);
      for (int j = 0; j < n; ++j) rhoInv[perm[j]] = j;
      E.edges.push_back({s, t, k, perm});
      E.edges.push_back({t, s, perm[k], rhoInv});
      E.eps.push_back(eRev);
      E.eps.push_back(eFwd);
      E.adj[s][k] = eFwd;
      E.adj[t][perm[k]] = eRev;
      if (fresh) {
        E.parentEdge[t] = eFwd;
        queue.push_back(t);
      }
    }
  }
  return E;
}

ExchangeGraph oppositeGraph(const ExchangeGraph& E) {
  ExchangeGraph out = E;
  for (auto& s : out.seeds)
    for (auto& x : s.B.a) x = -x;
  // Recompute G by propagating the base reference data through the negated
  // exchange matrices (the base seed keeps its stored reference basis).
  int V = E.vertexCount();
  std::vector<bool> have(V, false);
  out.seeds[out.base].G = E.seeds[E.base].G;
  have[out.base] = true;
  std::deque<int> queue{out.base};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int k = 0; k < E.n; ++k) {
      int e = out.adj[s][k];
      const GraphEdge& ed = out.edges[e];
      if (ed.src != s) continue;  // adj stores the outgoing half-edge; defensive
      int t = ed.dst;
      if (have[t]) continue;
      ExchangeMatrix Bs{E.n, out.seeds[s].B};
      IMat G(E.n, E.n);
      for (int c = 0; c < E.n; ++c) {
        IVec raw = tropicalEdgeMap(Bs, k, out.seeds[s].G.col(c));
        for (int j = 0; j < E.n; ++j) G(ed.rho[j], c) = raw[j];
      }
      out.seeds[t].G = G;
      have[t] = true;
      queue.push_back(t);
    }
  }
  return out;
}

GraphAutomorphism composeAut(const ExchangeGraph& E, const GraphAutomorphism& g,
                             const GraphAutomorphism& h) {
  int V = E.vertexCount();
  GraphAutomorphism out;
  out.vmap.resize(V);
  out.lmap.assign(V, std::vector<int>(E.n));
  for (int s = 0; s < V; ++s) {
    out.vmap[s] = g.vmap[h.vmap[s]];
    for (int i = 0; i < E.n; ++i) out.lmap[s][i] = g.lmap[h.vmap[s]][h.lmap[s][i]];
  }
  return out;
}

GraphAutomorphism inverseAut(const ExchangeGraph& E, const GraphAutomorphism& g) {
  int V = E.vertexCount();
  GraphAutomorphism out;
  out.vmap.resize(V);
  out.lmap.assign(V, std::vector<int>(E.n));
  for (int s = 0; s < V; ++s) {
    out.vmap[g.vmap[s]] = s;
    for (int i = 0; i < E.n; ++i) out.lmap[g.vmap[s]][g.lmap[s][i]] = i;
  }
  return out;
}

bool isIdentityAut(const GraphAutomorphism& g) {
  for (size_t s = 0; s < g.vmap.size(); ++s) {
    if (g.vmap[s] != static_cast<int>(s)) return false;
    for (size_t i = 0; i < g.lmap[s].size(); ++i)
      if (g.lmap[s][i] != static_cast<int>(i)) return false;
  }
  return true;
}

namespace {

// Propagate a candidate (base -> t0, h) through the graph; returns the full
// isomorphism if every edge and every exchange matrix entry is consistent.
std::optional<GraphAutomorphism> propagate(const ExchangeGraph& E1, const ExchangeGraph& E2,
                                           int t0, const std::vector<int>& h) {
  int V = E1.vertexCount(), n = E1.n;
  GraphAutomorphism g;
  g.vmap.assign(V, -1);
  g.lmap.assign(V, {});
  g.vmap[E1.base] = t0;
  g.lmap[E1.base] = h;
  std::deque<int> queue{E1.base};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int k = 0; k < n; ++k) {
      const GraphEdge& e = E1.edges[E1.adj[s][k]];
      int w = e.dst;
      const GraphEdge& e2 = E2.edges[E2.adj[g.vmap[s]][g.lmap[s][k]]];
      std::vector<int> lw(n);
      for (int j = 0; j < n; ++j) lw[e.rho[j]] = e2.rho[g.lmap[s][j]];
      if (g.vmap[w] < 0) {
        g.vmap[w] = e2.dst;
        g.lmap[w] = lw;
        queue.push_back(w);
      } else if (g.vmap[w] != e2.dst || g.lmap[w] != lw) {
        return std::nullopt;
      }
    }
  }
  for (int s = 0; s < V; ++s) {
    const IMat& B1 = E1.seeds[s].B;
    const IMat& B2 = E2.seeds[g.vmap[s]].B;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (B2(g.lmap[s][i], g.lmap[s][j]) != B1(i, j)) return std::nullopt;
  }
  return g;
}

}  // namespace

std::vector<GraphAutomorphism> findIsomorphisms(const ExchangeGraph& E1,
                                                const ExchangeGraph& E2) {
  std::vector<GraphAutomorphism> out;
  if (E1.n != E2.n || E1.vertexCount() != E2.vertexCount()) return out;
  int n = E1.n;
  const IMat& B1 = E1.seeds[E1.base].B;
  std::vector<int> h(n);
  std::iota(h.begin(), h.end(), 0);
  for (int t0 = 0; t0 < E2.vertexCount(); ++t0) {
    const IMat& B2 = E2.seeds[t0].B;
    std::sort(h.begin(), h.end());
    do {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j)
          if (B2(h[i], h[j]) != B1(i, j)) ok = false;
      if (!ok) continue;
      if (auto g = propagate(E1, E2, t0, h)) out.push_back(std::move(*g));
    } while (std::next_permutation(h.begin(), h.end()));
  }
  return out;
}

std::vector<GraphAutomorphism> modularGroup(const ExchangeGraph& E) {
  return findIsomorphisms(E, E);
}

std::optional<GraphAutomorphism> findDtElement(const ExchangeGraph& E,
                                               const std::vector<GraphAutomorphism>& group) {
  int n = E.n;
  for (const auto& g : group) {
    bool ok = true;
    for (int s = 0; s < E.vertexCount() && ok; ++s) {
      int ts = g.vmap[s];
      // Columns of phi_{R^t}(T(s), s); requirement: column T(i) equals -e_i.
      IMat M(n, n);
      for (int j = 0; j < n; ++j) {
        IVec ej(n, 0);
        ej[j] = 1;
        IVec img = E.tropicalTransition(ts, s, ej);
        for (int i = 0; i < n; ++i) M(i, j) = img[i];
      }
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j)
          if (M(i, j) != (j == g.lmap[s][i] ? -1 : 0)) ok = false;
    }
    if (ok) return g;
  }
  return std::nullopt;
}

}  // namespace cstab
