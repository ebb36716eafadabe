#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "r0gp/matrix.hpp"
#include "r0gp/seir.hpp"

namespace r0gp {

/// Inter-region mobility: p_ij is the daily fraction of region-i residents
/// visiting region j (rows sum to <= 1), plus region populations.
struct MobilityData {
    SquareMatrix P;
    Eigen::VectorXd populations;

    Eigen::Index n() const { return P.n(); }
    void validate() const;
};

enum class MobilityKind { gravity, uniform_noise };

MobilityKind mobility_kind_from_string(const std::string& s);

/// Deterministic synthetic mobility: dominant diagonal (residents mostly
/// stay home), row sums <= 1, populations log-uniform in [1e4, 1e7]. The
/// gravity kind weights cross-visits by population over squared distance on
/// a seeded planar layout.
MobilityData synth_mobility(Eigen::Index n, std::uint64_t seed,
                            MobilityKind kind = MobilityKind::gravity);

/// A = alpha P P^T (symmetric, non-negative).
SquareMatrix build_contact_matrix(const MobilityData& mob, double alpha);

struct BaseRates {
    double beta = 0.1, gamma = 0.2, delta = 0.1;
};

/// Uniform-rate SEIR over the mobility regions with A = alpha P P^T and
/// s0 = populations.
SeirModel make_uniform_seir(const MobilityData& mob, const BaseRates& rates, double alpha);

/// alpha such that the model hits target_r0, using linearity of R0 in alpha:
/// alpha* = target_r0 / R0(alpha = 1).
double calibrate_alpha(const MobilityData& mob, const BaseRates& rates,
                       const Eigen::VectorXd& s0, double target_r0);

struct SweepSpec {
    std::vector<double> beta_values;
    std::vector<double> gamma_values;
    std::vector<double> delta_values;

    /// 20 beta values in [0.025, 0.5] and 10 gamma/delta values in
    /// [0.05, 0.5]: the 2,000-model grid.
    static SweepSpec default_grid();
    void validate() const;
};

struct RateTriple {
    double beta, gamma, delta;
};

/// Cartesian product, beta-major then gamma then delta.
std::vector<RateTriple> generate_sweep(const SweepSpec& spec);

std::vector<double> linspace(double lo, double hi, int count);

/// JSON manifest listing model ids (zero-padded indexes) and rate triples.
std::string sweep_manifest_json(const SweepSpec& spec);

MobilityData read_mobility_csv(const std::filesystem::path& p_path,
                               const std::filesystem::path& populations_path);

void write_populations_csv(const std::filesystem::path& path, const Eigen::VectorXd& populations);

}  // namespace r0gp
