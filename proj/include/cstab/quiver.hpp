// Quivers, seed mutation, exchange-graph enumeration, the cluster modular
// group and the DT element.
//
// A vertex of the exchange graph is a seed (B, G) where B is the exchange
// matrix and the columns of G are the tropical images of the base vertex's
// basis covectors. Two seeds are identified iff (B, G) agree up to a
// simultaneous relabelling; the relabelling realizing equality supplies the
// edge bijection rho. Indices are 0-based throughout.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cstab/linalg.hpp"

namespace cstab {

struct CapExceeded : std::runtime_error {
  explicit CapExceeded(size_t cap)
      : std::runtime_error("seed cap exceeded (" + std::to_string(cap) +
                           "); input is likely not of finite type") {}
};

struct ExchangeMatrix {
  int n = 0;
  IMat v;  // skew-symmetric

  bool skewSymmetric() const;
};

ExchangeMatrix mutateExchangeMatrix(const ExchangeMatrix& B, int k);

// Single-edge tropical map, Eq.-(14)-style max-plus formula. Output slot j
// holds the coordinate labelled rho(j) at the target vertex.
RatVec tropicalEdgeMap(const ExchangeMatrix& B, int k, const RatVec& w);
IVec tropicalEdgeMap(const ExchangeMatrix& B, int k, const IVec& w);

// Built-in quivers: a1, a2, a3, a4, d4, a1xa1 (coherent orientations).
ExchangeMatrix namedQuiver(const std::string& name);

struct Seed {
  IMat B;  // n x n exchange matrix
  IMat G;  // n x n, column j = tropical image of base covector j
};

// Lexicographically minimal simultaneous relabelling of (B, G); perm maps
// input positions to canonical positions. The minimizer is unique because
// det(G) = +-1 rules out repeated G rows.
Seed canonicalSeed(const Seed& s, std::vector<int>* perm = nullptr);
std::string seedKey(const Seed& s);

struct GraphEdge {
  int src = -1, dst = -1;
  int k = -1;               // edge position at src
  std::vector<int> rho;     // rho[j]: position j at src -> position at dst
};

struct ExchangeGraph {
  int n = 0;
  int base = 0;
  std::vector<Seed> seeds;
  std::vector<GraphEdge> edges;           // directed half-edges
  std::vector<int> eps;                   // eps[e] = opposite half-edge
  std::vector<std::vector<int>> adj;      // adj[s][k] = edge id at (s, k)
  std::vector<int> parentEdge;            // BFS-tree edge into s (-1 at base)

  int vertexCount() const { return static_cast<int>(seeds.size()); }
  int undirectedEdgeCount() const { return static_cast<int>(edges.size()) / 2; }

  // Tropical coordinate change across a stored edge (applies rho).
  RatVec crossEdge(int edgeId, const RatVec& w) const;
  IVec crossEdge(int edgeId, const IVec& w) const;

  // Edge ids of the canonical path s1 -> s2 (up through the BFS tree, down
  // again).
  std::vector<int> path(int s1, int s2) const;

  // phi_{R^t}(s1,s2) along the canonical path.
  RatVec tropicalTransition(int s1, int s2, const RatVec& w) const;
  IVec tropicalTransition(int s1, int s2, const IVec& w) const;

  ExchangeMatrix exchangeMatrixAt(int s) const { return {n, seeds[s].B}; }
};

ExchangeGraph enumerateExchangeGraph(const ExchangeMatrix& B0, size_t cap = 100000);

// Same underlying graph and edge bijections, v negated, tropical data (G)
// recomputed. Seeds of the result are not in canonical form.
ExchangeGraph oppositeGraph(const ExchangeGraph& E);

struct GraphAutomorphism {
  std::vector<int> vmap;               // vertex images
  std::vector<std::vector<int>> lmap;  // lmap[s]: positions at s -> positions at vmap[s]
};

GraphAutomorphism composeAut(const ExchangeGraph& E, const GraphAutomorphism& g,
                             const GraphAutomorphism& h);  // g after h
GraphAutomorphism inverseAut(const ExchangeGraph& E, const GraphAutomorphism& g);
bool isIdentityAut(const GraphAutomorphism& g);

// All isomorphisms E1 -> E2 preserving v and rho.
std::vector<GraphAutomorphism> findIsomorphisms(const ExchangeGraph& E1,
                                                const ExchangeGraph& E2);
std::vector<GraphAutomorphism> modularGroup(const ExchangeGraph& E);

// The unique automorphism satisfying the DT condition
// phi(T(s),s)(w)(i) = -w(T(i)) on the positive orthant, if present.
std::optional<GraphAutomorphism> findDtElement(const ExchangeGraph& E,
                                               const std::vector<GraphAutomorphism>& group);

}  // namespace cstab
