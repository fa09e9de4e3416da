#include "qsteer/lhs.hpp"

#include "qsteer/rng.hpp"

#include <cmath>
#include <numbers>

namespace qsteer {

namespace {

// Columns are the Fourier basis kets of dimension d.
Matrix fourier_columns(int d) {
  Matrix f(d, d);
  for (int k = 0; k < d; ++k) f.col(k) = fourier_vector(d, k);
  return f;
}

}  // namespace

void validate_strategy(const LhsStrategy& strategy, double tol) {
  if (strategy.d < 2)
    throw std::invalid_argument("LhsStrategy: dimension must be >= 2");
  if (strategy.responses.empty())
    throw std::invalid_argument("LhsStrategy: at least one response required");
  double total = 0.0;
  for (const auto& response : strategy.responses) {
    if (response.a1 < 0 || response.a1 >= strategy.d || response.a2 < 0 ||
        response.a2 >= strategy.d)
      throw std::invalid_argument("LhsStrategy: declared outcome out of range");
    if (response.weight < -tol)
      throw std::invalid_argument("LhsStrategy: weights must be nonnegative");
    if (response.rho.rows() != strategy.d || response.rho.cols() != strategy.d)
      throw std::invalid_argument("LhsStrategy: response state has wrong dimension");
    if (!is_density_matrix(response.rho, tol))
      throw std::invalid_argument("LhsStrategy: response state is not a density matrix");
    total += response.weight;
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("LhsStrategy: weights must sum to 1");
}

double lhs_kernel_value(const LhsStrategy& strategy, int d) {
  if (strategy.d != d)
    throw std::invalid_argument("lhs_kernel_value: strategy dimension mismatch");
  validate_strategy(strategy);
  const Matrix fourier = fourier_columns(d);
  double value = 0.0;
  for (const auto& response : strategy.responses) {
    const double computational = response.rho(response.a1, response.a1).real();
    const double conjugate =
        (fourier.col(response.a2).adjoint() * response.rho * fourier.col(response.a2))(0, 0)
            .real();
    value += response.weight * (computational + conjugate);
  }
  return value;
}

double lhs_bound_exact(int d) {
  if (d < 2) throw std::invalid_argument("lhs_bound_exact: dimension must be >= 2");
  const Matrix fourier = fourier_columns(d);
  double best = 0.0;
  for (int n = 0; n < d; ++n) {
    const Matrix conjugate_projector = fourier.col(n) * fourier.col(n).adjoint();
    for (int m = 0; m < d; ++m) {
      Matrix pair_sum = conjugate_projector;
      pair_sum(m, m) += Complex(1, 0);
      best = std::max(best, max_eigenvalue(pair_sum));
    }
  }
  return best;
}

namespace {

// Pure state from 2(d - 1) angles: hyperspherical magnitudes plus one phase
// per component after the first (which stays real).
Vector state_from_angles(int d, const std::vector<double>& angles) {
  Vector psi(d);
  double tail = 1.0;
  for (int j = 0; j < d - 1; ++j) {
    const double magnitude = tail * std::cos(angles[j]);
    const double phase = j == 0 ? 0.0 : angles[d - 2 + j];
    psi(j) = j == 0 ? Complex(magnitude, 0) : std::polar(magnitude, phase);
    tail *= std::sin(angles[j]);
  }
  psi(d - 1) = std::polar(tail, angles[2 * (d - 1) - 1]);
  return psi;
}

struct Objective {
  const Matrix& fourier;

  struct Eval {
    double value;
    int best_m;
    int best_n;
  };

  Eval operator()(const Vector& psi) const {
    const int d = static_cast<int>(psi.size());
    int best_m = 0;
    double computational = 0.0;
    for (int m = 0; m < d; ++m) {
      const double p = std::norm(psi(m));
      if (p > computational) {
        computational = p;
        best_m = m;
      }
    }
    const Vector overlaps = fourier.adjoint() * psi;
    int best_n = 0;
    double conjugate = 0.0;
    for (int n = 0; n < d; ++n) {
      const double p = std::norm(overlaps(n));
      if (p > conjugate) {
        conjugate = p;
        best_n = n;
      }
    }
    return {computational + conjugate, best_m, best_n};
  }
};

}  // namespace

LhsSearchResult lhs_search(int d, int restarts, std::uint64_t seed) {
  if (d != 2 && d != 4 && d != 8 && d != 16)
    throw std::invalid_argument("lhs_search: dimension must be one of {2, 4, 8, 16}");
  if (restarts < 1) throw std::invalid_argument("lhs_search: restarts must be >= 1");

  const Matrix fourier = fourier_columns(d);
  const Objective objective{fourier};
  const int n_angles = 2 * (d - 1);
  constexpr double kInitialStep = 0.5;
  constexpr double kMinStep = 1e-7;
  constexpr int kMaxSweeps = 400;

  double best_value = -1.0;
  Vector best_state;
  Objective::Eval best_eval{};

  for (int restart = 0; restart < restarts; ++restart) {
    auto engine = make_engine(seed, static_cast<std::uint64_t>(restart));
    std::vector<double> angles(n_angles);
    for (int j = 0; j < d - 1; ++j) angles[j] = uniform_range(engine, 0.0, std::numbers::pi / 2);
    for (int j = d - 1; j < n_angles; ++j)
      angles[j] = uniform_range(engine, 0.0, 2.0 * std::numbers::pi);

    Vector psi = state_from_angles(d, angles);
    auto current = objective(psi);
    double step = kInitialStep;
    int sweeps = 0;
    while (step > kMinStep && sweeps < kMaxSweeps) {
      bool improved = false;
      for (int j = 0; j < n_angles; ++j) {
        for (const double delta : {step, -step}) {
          const double saved = angles[j];
          angles[j] = saved + delta;
          const Vector candidate = state_from_angles(d, angles);
          const auto eval = objective(candidate);
          if (eval.value > current.value) {
            current = eval;
            psi = candidate;
            improved = true;
            break;
          }
          angles[j] = saved;
        }
      }
      if (!improved) step *= 0.5;
      ++sweeps;
    }
    if (current.value > best_value) {
      best_value = current.value;
      best_state = psi;
      best_eval = current;
    }
  }

  LhsStrategy strategy;
  strategy.d = d;
  strategy.responses.push_back(
      {best_eval.best_m, best_eval.best_n, 1.0, best_state * best_state.adjoint()});
  return {best_value, std::move(strategy)};
}

Matrix unsteerable_state(const LhsStrategy& strategy) {
  validate_strategy(strategy);
  Matrix mixture = Matrix::Zero(strategy.d, strategy.d);
  for (const auto& response : strategy.responses) mixture += response.weight * response.rho;
  return mixture;
}

}  // namespace qsteer
