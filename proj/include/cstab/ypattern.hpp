// Independent rational-function oracle for Y-patterns at rank <= 3.
//
// Y-variables are tracked as exact fractions of multivariate integer
// polynomials in the initial variables, reduced to canonical form by
// multivariate gcd. Deliberately self-contained: nothing here touches the
// (B, G) seed identification that it is used to validate.
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cstab/quiver.hpp"

namespace cstab {

constexpr int kOracleMaxRank = 3;

using Mono = std::array<int, kOracleMaxRank>;  // exponent vector, unused slots 0

struct Poly {
  std::map<Mono, Int> terms;  // nonzero coefficients only

  bool isZero() const { return terms.empty(); }
  static Poly constant(Int c);
  static Poly variable(int i);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }

  std::string str() const;
};

// Exact division; throws if it does not divide.
Poly polyDivExact(const Poly& a, const Poly& b);
Poly polyGcd(Poly a, Poly b);

struct RatFun {
  Poly num, den;  // canonical: gcd 1, den leading coefficient > 0

  static RatFun variable(int i);
  static RatFun one();

  RatFun reduced() const;
  RatFun inverse() const;

  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend bool operator==(const RatFun& a, const RatFun& b);

  std::string str() const;
};

struct YState {
  ExchangeMatrix B;
  std::vector<RatFun> y;  // y[j] = coefficient at slot j, in base variables
};

YState initialYState(const ExchangeMatrix& B0);
YState mutateYState(const YState& s, int k);

// Y-variables after applying a mutation word to the initial state.
std::vector<RatFun> oracleYPattern(const ExchangeMatrix& B0, const std::vector<int>& word);

// Permutation-invariant fingerprint of a Y-tuple: the sorted canonical forms.
std::string yTupleKey(const std::vector<RatFun>& y);

// Validates the (B, G) seed identification of an enumerated graph against the
// oracle: every edge must land on a state whose Y-tuple agrees (up to
// permutation) with the target vertex's, and distinct vertices must have
// distinct Y-tuples. Returns a human-readable list of disagreements.
std::vector<std::string> validateSeedIdentity(const ExchangeGraph& E);

}  // namespace cstab
