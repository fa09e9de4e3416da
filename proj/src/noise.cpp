#include "qsteer/noise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qsteer {

namespace {

// Stream tags keep the jitter draws and the per-setting sampling draws on
// disjoint substreams of one user seed.
constexpr std::uint64_t kSampleTagBase = 0x73616d70ULL;  // "samp"
constexpr std::uint64_t kJitterTagBase = 0x6a697474ULL;  // "jitt"

}  // namespace

QubitChannel make_channel(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelSpec::Kind::Identity:
      return {};
    case ChannelSpec::Kind::Depolarizing: {
      if (spec.p < 0.0 || spec.p > 1.0)
        throw std::invalid_argument("make_channel: depolarizing probability must be in [0, 1]");
      const double p = spec.p;
      return [p](const Matrix2& rho) -> Matrix2 {
        return (1.0 - p) * rho + p * 0.5 * Matrix2::Identity();
      };
    }
  }
  throw std::invalid_argument("make_channel: unknown channel kind");
}

Matrix4 werner_pair(double visibility) {
  if (visibility < 0.0 || visibility > 1.0)
    throw std::invalid_argument("werner_pair: visibility must be in [0, 1]");
  Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
  bell(0) = Complex(1.0 / std::sqrt(2.0), 0);
  bell(3) = bell(0);
  return visibility * (bell * bell.adjoint()) +
         (1.0 - visibility) * 0.25 * Matrix4::Identity();
}

CountRecord sample_counts(const JointProbabilityTable& table, std::int64_t shots,
                          std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  const int d = table.dim();
  // Table entries are validated on construction; rebuild the cumulative
  // distribution row-major and clamp its tail to 1.
  std::vector<double> cumulative(static_cast<std::size_t>(d) * d);
  double running = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      running += table.probs()(a, b);
      cumulative[static_cast<std::size_t>(a) * d + b] = running;
    }
  cumulative.back() = 1.0;

  auto engine = make_engine(seed, kSampleTagBase + static_cast<std::uint64_t>(table.setting()));
  CountRecord record;
  record.setting = table.setting();
  record.shots = shots;
  record.seed = seed;
  record.counts.setZero(d, d);
  for (std::int64_t shot = 0; shot < shots; ++shot) {
    const double u = uniform_unit(engine);
    const auto cell = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto flat = static_cast<Eigen::Index>(cell - cumulative.begin());
    record.counts(flat / d, flat % d) += 1;
  }
  return record;
}

KernelEstimate estimate_kernel(const CountRecord& setting1, const CountRecord& setting2,
                               ExperimentKind kind) {
  if (kind != ExperimentKind::Epr && kind != ExperimentKind::Ss)
    throw std::invalid_argument("estimate_kernel: kind must be Epr or Ss");
  if (setting1.setting != 1 || setting2.setting != 2)
    throw std::invalid_argument("estimate_kernel: expected records for settings 1 and 2");
  const auto d = setting1.counts.rows();
  if (d < 2 || setting1.counts.cols() != d || setting2.counts.rows() != d ||
      setting2.counts.cols() != d)
    throw std::invalid_argument("estimate_kernel: records have mismatched dimensions");
  if (setting1.shots < 1 || setting2.shots < 1)
    throw std::invalid_argument("estimate_kernel: records must contain at least one shot");

  std::int64_t masked1 = 0;
  std::int64_t masked2 = 0;
  for (Eigen::Index a = 0; a < d; ++a) {
    masked1 += setting1.counts(a, a);
    const Eigen::Index partner = kind == ExperimentKind::Epr ? (d - a) % d : a;
    masked2 += setting2.counts(a, partner);
  }
  const double s1 = static_cast<double>(masked1) / static_cast<double>(setting1.shots);
  const double s2 = static_cast<double>(masked2) / static_cast<double>(setting2.shots);
  const double var1 = s1 * (1.0 - s1) / static_cast<double>(setting1.shots);
  const double var2 = s2 * (1.0 - s2) / static_cast<double>(setting2.shots);
  return {s1 + s2, std::sqrt(var1 + var2)};
}

ProjectorBank make_jittered_bank(const QuditIndexCodec& codec, int setting, double sigma,
                                 std::mt19937_64& engine) {
  if (sigma < 0.0)
    throw std::invalid_argument("make_jittered_bank: jitter must be >= 0");
  if (setting == 1 || sigma == 0.0) return make_projector_bank(codec, setting);

  ProjectorBank bank{setting, codec.n_qubits(), codec.dim(), {}, {}};
  Matrix2 h_projector = Matrix2::Zero();
  h_projector(0, 0) = Complex(1, 0);
  auto jittered_projector = [&](int m, int k) {
    const double theta = solve_hwp_angle(m, k) + sigma * normal_sample(engine);
    const Matrix2 u = waveplate_unit(theta);
    return Matrix2(u.adjoint() * h_projector * u);
  };
  // Draw order: qubit-major, outcome-minor, Alice before Bob.
  for (int m = 1; m <= codec.n_qubits(); ++m)
    for (int k = 0; k < codec.dim(); ++k) bank.alice.push_back(jittered_projector(m, k));
  for (int m = 1; m <= codec.n_qubits(); ++m)
    for (int k = 0; k < codec.dim(); ++k) bank.bob.push_back(jittered_projector(m, k));
  return bank;
}

namespace {

JointProbabilityTable table_from_cells(int setting, Eigen::MatrixXd cells, bool renormalize) {
  if (renormalize) {
    // Independently perturbed projectors no longer partition unity, so the
    // assembled cells can sum slightly away from 1.
    const double total = cells.sum();
    if (total <= 0.0)
      throw std::invalid_argument("table_from_cells: cell matrix has no probability mass");
    cells /= total;
  }
  return JointProbabilityTable(setting, std::move(cells));
}

ProjectorBank bank_for(const QuditIndexCodec& codec, int setting, const NoiseSpec& noise,
                       std::uint64_t seed) {
  if (noise.angle_jitter == 0.0) return make_projector_bank(codec, setting);
  auto engine = make_engine(seed, kJitterTagBase + static_cast<std::uint64_t>(setting));
  return make_jittered_bank(codec, setting, noise.angle_jitter, engine);
}

}  // namespace

JointProbabilityTable epr_table_with_noise(const QuditIndexCodec& codec, int setting,
                                           const NoiseSpec& noise, std::uint64_t seed) {
  const ProjectorBank bank = bank_for(codec, setting, noise, seed);
  const std::vector<Matrix4> pairs(codec.n_qubits(), werner_pair(noise.visibility));
  return table_from_cells(setting, epr_cell_matrix(codec, pairs, bank),
                          noise.angle_jitter > 0.0);
}

JointProbabilityTable ss_table_with_noise(const QuditIndexCodec& codec, int setting,
                                          const NoiseSpec& noise, int prep_dim,
                                          std::uint64_t seed) {
  const ProjectorBank bank = bank_for(codec, setting, noise, seed);
  const auto source = horizontal_source(codec);
  const QubitChannel channel = make_channel(noise.channel);
  return table_from_cells(setting, ss_cell_matrix(codec, source, channel, prep_dim, bank),
                          noise.angle_jitter > 0.0);
}

}  // namespace qsteer
