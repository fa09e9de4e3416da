#pragma once

// Local-hidden-state mimicry of the steering scenarios. A hidden variable is
// a declared outcome pair (a1, a2) with an associated response state for Bob;
// this module evaluates the kernel such strategies reach, verifies the
// 1 + 1/sqrt(d) ceiling by exhaustive eigenvalue analysis of the projector
// pairs, and rediscovers it by randomized search over pure response states.

#include "qsteer/witness.hpp"

#include <cstdint>

namespace qsteer {

// One hidden-variable entry: declared outcomes for both settings, the joint
// probability of the entry, and Bob's response state.
struct LhsResponse {
  int a1 = 0;
  int a2 = 0;
  double weight = 0.0;
  Matrix rho;
};

struct LhsStrategy {
  int d = 0;
  std::vector<LhsResponse> responses;
};

/// Throws unless weights are nonnegative and normalized, declared outcomes
/// are in range and every response is a valid density matrix.
void validate_strategy(const LhsStrategy& strategy, double tol = kDefaultTol);

/// Kernel value of a strategy: sum over settings and hidden variables of the
/// declared-outcome projection probability, weighted by the entry weight.
double lhs_kernel_value(const LhsStrategy& strategy, int d);

/// Unsteerable ceiling computed from first principles: the maximum over all
/// declared pairs (m, n) of the largest eigenvalue of |m><m|_1 + |n><n|_2.
double lhs_bound_exact(int d);

struct LhsSearchResult {
  double value = 0.0;
  LhsStrategy strategy;
};

/// Random-restart hill climb over pure response states, parameterized by
/// 2(d - 1) angles. Deterministic for a given (seed, restarts); ties between
/// restarts resolve to the lowest restart index.
LhsSearchResult lhs_search(int d, int restarts, std::uint64_t seed);

/// Bob's marginal under a strategy: the weighted mixture of response states.
Matrix unsteerable_state(const LhsStrategy& strategy);

}  // namespace qsteer
