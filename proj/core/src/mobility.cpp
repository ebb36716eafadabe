#include "r0gp/mobility.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "r0gp/r0.hpp"

namespace r0gp {

namespace {

/// Minimal deterministic generator: mt19937_64 with an explicit unit-interval
/// mapping, so outputs are identical across standard libraries.
class UnitRng {
public:
    explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace

void MobilityData::validate() const {
    if (populations.size() != P.n()) {
        throw InputError("mobility: populations length must match P");
    }
    if (!(populations.array() > 0.0).all()) {
        throw InputError("mobility: populations must be positive");
    }
    if (!is_nonnegative(P, 0.0)) {
        throw InputError("mobility: P must be non-negative");
    }
    for (Eigen::Index i = 0; i < P.n(); ++i) {
        if (P.m().row(i).sum() > 1.0 + 1e-6) {
            throw InputError("mobility: row " + std::to_string(i) + " of P sums beyond 1");
        }
    }
}

MobilityKind mobility_kind_from_string(const std::string& s) {
    if (s == "gravity") return MobilityKind::gravity;
    if (s == "uniform-noise") return MobilityKind::uniform_noise;
    throw InputError("unknown mobility kind '" + s + "' (gravity | uniform-noise)");
}

MobilityData synth_mobility(Eigen::Index n, std::uint64_t seed, MobilityKind kind) {
    if (n < 1) throw InputError("synth_mobility: n must be >= 1");
    UnitRng rng(seed);

    Eigen::VectorXd populations(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        populations(i) = std::pow(10.0, rng.uniform(4.0, 7.0));
    }

    // Planar layout for gravity weights.
    Eigen::MatrixXd xy(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        xy(i, 0) = rng.next();
        xy(i, 1) = rng.next();
    }

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double stay_home = rng.uniform(0.6, 0.9);
        p(i, i) = stay_home;
        if (n == 1) continue;
        const double travel_mass = rng.uniform(0.05, 1.0 - stay_home);
        Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            if (kind == MobilityKind::gravity) {
                const double dx = xy(i, 0) - xy(j, 0);
                const double dy = xy(i, 1) - xy(j, 1);
                weights(j) = populations(j) / (0.01 + dx * dx + dy * dy);
            } else {
                weights(j) = rng.next();
            }
        }
        const double total = weights.sum();
        if (total > 0.0) {
            p.row(i) += (travel_mass / total) * weights.transpose();
            p(i, i) = stay_home;  // weights(i) = 0, but keep the diagonal explicit
        }
    }

    MobilityData mob{SquareMatrix(std::move(p)), std::move(populations)};
    mob.validate();
    return mob;
}

SquareMatrix build_contact_matrix(const MobilityData& mob, double alpha) {
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    mob.validate();
    return SquareMatrix(alpha * (mob.P.m() * mob.P.m().transpose()));
}

SeirModel make_uniform_seir(const MobilityData& mob, const BaseRates& rates, double alpha) {
    const Eigen::Index n = mob.n();
    SeirModel m{Eigen::VectorXd::Constant(n, rates.beta),
                Eigen::VectorXd::Constant(n, rates.gamma),
                Eigen::VectorXd::Constant(n, rates.delta),
                build_contact_matrix(mob, alpha),
                mob.populations};
    m.validate();
    return m;
}

double calibrate_alpha(const MobilityData& mob, const BaseRates& rates,
                       const Eigen::VectorXd& s0, double target_r0) {
    if (!(target_r0 > 0.0)) throw InputError("target R0 must be positive");
    if (s0.size() != mob.n() || !(s0.array() > 0.0).all()) {
        throw InputError("s0 must be positive and match the mobility dimension");
    }
    const double alpha0 = 1.0;
    SeirModel probe{Eigen::VectorXd::Constant(mob.n(), rates.beta),
                    Eigen::VectorXd::Constant(mob.n(), rates.gamma),
                    Eigen::VectorXd::Constant(mob.n(), rates.delta),
                    build_contact_matrix(mob, alpha0), s0};
    const double r0_at_probe = r0_eigen(linearize(probe));
    if (!(r0_at_probe > 0.0)) {
        throw SolverError("calibrate_alpha: R0 vanishes for the probe contact matrix");
    }
    // F scales linearly in alpha, so R0 does too.
    return alpha0 * target_r0 / r0_at_probe;
}

SweepSpec SweepSpec::default_grid() {
    return {linspace(0.025, 0.5, 20), linspace(0.05, 0.5, 10), linspace(0.05, 0.5, 10)};
}

void SweepSpec::validate() const {
    for (const auto* grid : {&beta_values, &gamma_values, &delta_values}) {
        if (grid->empty()) throw InputError("sweep grids must be non-empty");
        for (const double v : *grid) {
            if (!(v > 0.0)) throw InputError("sweep grids must be positive");
        }
    }
}

std::vector<RateTriple> generate_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<RateTriple> triples;
    triples.reserve(spec.beta_values.size() * spec.gamma_values.size() *
                    spec.delta_values.size());
    for (const double b : spec.beta_values) {
        for (const double g : spec.gamma_values) {
            for (const double d : spec.delta_values) {
                triples.push_back({b, g, d});
            }
        }
    }
    return triples;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw InputError("linspace: count must be >= 1");
    std::vector<double> values;
    values.reserve(static_cast<size_t>(count));
    if (count == 1) {
        values.push_back(lo);
        return values;
    }
    for (int i = 0; i < count; ++i) {
        values.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    }
    return values;
}

std::string sweep_manifest_json(const SweepSpec& spec) {
    const std::vector<RateTriple> triples = generate_sweep(spec);
    nlohmann::json models = nlohmann::json::array();
    int width = 1;
    for (size_t c = triples.size(); c >= 10; c /= 10) ++width;
    for (size_t i = 0; i < triples.size(); ++i) {
        std::ostringstream id;
        id << 'm' << std::setw(width) << std::setfill('0') << i;
        models.push_back({{"id", id.str()},
                          {"beta", triples[i].beta},
                          {"gamma", triples[i].gamma},
                          {"delta", triples[i].delta}});
    }
    nlohmann::json j;
    j["count"] = triples.size();
    j["models"] = std::move(models);
    return j.dump(2);
}

MobilityData read_mobility_csv(const std::filesystem::path& p_path,
                               const std::filesystem::path& populations_path) {
    SquareMatrix p = read_matrix_csv(p_path);
    std::ifstream in(populations_path);
    if (!in) {
        throw InputError("cannot open populations CSV: " + populations_path.string());
    }
    std::vector<double> pops;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            pops.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw InputError("bad population value '" + line + "' in " +
                             populations_path.string());
        }
    }
    if (static_cast<Eigen::Index>(pops.size()) != p.n()) {
        throw InputError("populations CSV length disagrees with mobility matrix");
    }
    MobilityData mob{std::move(p),
                     Eigen::Map<Eigen::VectorXd>(pops.data(), static_cast<Eigen::Index>(pops.size()))};
    mob.validate();
    return mob;
}

void write_populations_csv(const std::filesystem::path& path, const Eigen::VectorXd& populations) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write populations CSV: " + path.string());
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < populations.size(); ++i) {
        out << populations(i) << '\n';
    }
}

}  // namespace r0gp
