#pragma once

// Rational dependence among real numbers: exact for inputs in the quadratic
// surd grammar, lattice-reduction integer relation search for floats.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrtlab/exact.hpp"

namespace hrtlab {

struct IntegerRelation {
  /// sum_i coefficients[i] * values[i] = 0.
  std::vector<std::int64_t> coefficients;
  /// |sum_i q_i v_i| / max_i |q_i| (0 for exact relations).
  double residual = 0.0;
};

struct IndependenceCertificate {
  bool independent = true;
  std::optional<IntegerRelation> relation;
  /// Coefficient bound the search covered (maxDen).
  std::int64_t searchedBound = 0;
  /// Every integer relation that would verify at tol has Euclidean norm at
  /// least this (min Gram-Schmidt norm of the reduced lattice basis);
  /// +inf for exact inputs.
  double normLowerBound = 0.0;
  bool exact = false;
};

/// Homogeneous test: is there an integer vector q != 0 with |q_i| <= maxDen
/// and sum q_i v_i = 0 (to tol)? PrecisionExhausted when the best bounded
/// candidate verifies at 10 tol but not at tol.
IndependenceCertificate is_rationally_independent(std::span<const Real> values, std::int64_t maxDen,
                                                  double tol = 1e-12);

struct Relation {
  /// Index of the dependent value.
  std::size_t j = 0;
  Rational u;
  /// One coefficient per basis element, in basis order.
  std::vector<Rational> d;
  /// |x_j - u - sum_l d_l x_l| evaluated in long double.
  double residual = 0.0;
};

struct RelationBasis {
  std::size_t count = 0;
  /// Values that, together with 1, form a Q-basis; chosen greedily in index
  /// order.
  std::vector<std::size_t> basisIndices;
  /// x_j = u_j + sum_l d_{j,l} x_{basis l} for every non-basis j, ascending j.
  std::vector<Relation> relations;
  /// lcm of the denominators of all u_j and d_{j,l}.
  std::int64_t L = 1;
  bool exact = false;
};

/// Basis and relations of {1, x_1, .., x_N}. Exact arithmetic when every value
/// is exact; otherwise float detection with rationals of denominator at most
/// maxDen, verified to tol.
RelationBasis detect_relations(std::span<const Real> values, std::int64_t maxDen, double tol = 1e-12);

/// Exact check of every relation (requires rb.exact and exact values): true
/// when all substitute to exactly zero.
bool relations_hold_exactly(const RelationBasis& rb, std::span<const Real> values);

struct GroupClosureDescriptor {
  /// m = number of basis elements.
  std::size_t torusDimension = 0;
  /// L: the closure is the union of A^r K for r = 0 .. L-1.
  std::int64_t componentCount = 1;
  /// Row k: the exponents d_{k,l} (basis rows are unit vectors), so that the
  /// k-th diagonal entry of A^{qL} is prod_l z_l^{d_{k,l} q L}.
  std::vector<std::vector<Rational>> exponentsPerQL;
  /// Row k: the integer exponents d_{k,l} L of the k-th entry of A^L.
  std::vector<std::vector<std::int64_t>> exponentsOfAL;
};

GroupClosureDescriptor group_closure(const RelationBasis& rb);

/// {"basis": [...], "relations": [{"j":, "u": "p/q", "d": [...]}], "L": n}
std::string relation_basis_to_json(const RelationBasis& rb);

namespace detail {

/// LLL reduction (delta = 0.99) of the integer row basis, in place. Rows hold
/// integers stored as long double.
void lll_reduce(std::vector<std::vector<long double>>& basis, long double delta = 0.99L);

}  // namespace detail

}  // namespace hrtlab
