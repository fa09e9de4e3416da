#pragma once

// Noise models and finite-statistics simulation: isotropic pair noise with a
// single visibility knob, per-qubit channels for the prepare-and-send
// protocol, wave-plate angle jitter, seeded multinomial coincidence sampling
// and standard-error propagation into kernel estimates.

#include "qsteer/rng.hpp"
#include "qsteer/witness.hpp"

#include <cstdint>

namespace qsteer {

struct ChannelSpec {
  enum class Kind { Identity, Depolarizing };
  Kind kind = Kind::Identity;
  double p = 0.0;

  bool operator==(const ChannelSpec&) const = default;
};

/// Concrete map on qubit states for a channel spec.
QubitChannel make_channel(const ChannelSpec& spec);

// Single-knob noise model: pair visibility, HWP angle jitter (radians,
// standard deviation) and the Bob-side qubit channel.
struct NoiseSpec {
  double visibility = 1.0;
  double angle_jitter = 0.0;
  ChannelSpec channel;
};

/// Isotropic mixture v |phi><phi| + (1 - v) I/4 of the ideal pair with white
/// noise. Fidelity to the ideal pair is (1 + 3v) / 4.
Matrix4 werner_pair(double visibility);

// Multinomial coincidence counts for one setting. The stream that produced
// the counts is fully determined by (seed, setting).
struct CountRecord {
  int setting = 1;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Draws `shots` outcomes from the d^2 cells of a table; deterministic for a
/// given seed.
CountRecord sample_counts(const JointProbabilityTable& table, std::int64_t shots,
                          std::uint64_t seed);

struct KernelEstimate {
  double kernel = 0.0;
  double std_error = 0.0;
};

/// Kernel estimate from empirical frequencies with the kind's correlation
/// masks; the error combines the multinomial variance of each masked sum in
/// quadrature.
KernelEstimate estimate_kernel(const CountRecord& setting1, const CountRecord& setting2,
                               ExperimentKind kind);

/// Projector bank with every HWP angle independently perturbed by a zero-mean
/// normal of standard deviation `sigma` (setting 1 uses no wave plates and is
/// returned ideal).
ProjectorBank make_jittered_bank(const QuditIndexCodec& codec, int setting, double sigma,
                                 std::mt19937_64& engine);

/// Entangled-pair table under a noise spec: every pair at the given
/// visibility, projectors jittered when angle_jitter > 0. Jittered cell
/// matrices are renormalized so the table remains a sampling distribution.
JointProbabilityTable epr_table_with_noise(const QuditIndexCodec& codec, int setting,
                                           const NoiseSpec& noise, std::uint64_t seed);

/// Prepare-and-send table under a noise spec (channel plus optional jitter).
JointProbabilityTable ss_table_with_noise(const QuditIndexCodec& codec, int setting,
                                          const NoiseSpec& noise, int prep_dim,
                                          std::uint64_t seed);

}  // namespace qsteer
