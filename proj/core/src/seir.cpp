#include "r0gp/seir.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace r0gp {

namespace {

void require_positive(const Eigen::VectorXd& v, const char* what) {
    if (v.size() < 1 || !(v.array() > 0.0).all()) {
        throw InputError(std::string(what) + " must be a non-empty positive vector");
    }
}

struct Derivatives {
    Eigen::VectorXd ds, de, dz, dr;
};

Derivatives rhs(const SeirModel& m, const Eigen::VectorXd& s, const Eigen::VectorXd& e,
                const Eigen::VectorXd& z) {
    const Eigen::VectorXd force = m.beta.cwiseProduct(s).cwiseProduct(m.contacts.m() * z);
    Derivatives d;
    d.ds = -force;
    d.de = force - m.gamma.cwiseProduct(e);
    d.dz = m.gamma.cwiseProduct(e) - m.delta.cwiseProduct(z);
    d.dr = m.delta.cwiseProduct(z);
    return d;
}

}  // namespace

void SeirModel::validate() const {
    require_positive(beta, "beta");
    require_positive(gamma, "gamma");
    require_positive(delta, "delta");
    require_positive(s0, "s0");
    const Eigen::Index n = beta.size();
    if (gamma.size() != n || delta.size() != n || s0.size() != n || contacts.n() != n) {
        throw InputError("SEIR parameter dimensions disagree");
    }
    if (!is_nonnegative(contacts, 0.0)) {
        throw InputError("contact matrix must be non-negative");
    }
}

LinearizedEpidemic linearize(const SeirModel& m) {
    m.validate();
    const Eigen::Index n = m.groups();
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    f.topRightCorner(n, n) =
        m.beta.cwiseProduct(m.s0).asDiagonal() * m.contacts.m();
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    v.topLeftCorner(n, n) = (-m.gamma).asDiagonal();
    v.bottomLeftCorner(n, n) = m.gamma.asDiagonal();
    v.bottomRightCorner(n, n) = (-m.delta).asDiagonal();
    // V is block triangular with negative diagonal, hence Hurwitz by structure.
    return LinearizedEpidemic(SquareMatrix(std::move(f)), SquareMatrix(std::move(v)));
}

SeirState seeded_init(const SeirModel& m, double exposed_frac) {
    if (!(exposed_frac >= 0.0) || exposed_frac >= 1.0) {
        throw InputError("exposed_frac must lie in [0, 1)");
    }
    SeirState st;
    st.e = exposed_frac * m.s0;
    st.s = m.s0 - st.e;
    st.z = Eigen::VectorXd::Zero(m.groups());
    st.r = Eigen::VectorXd::Zero(m.groups());
    return st;
}

Trajectory simulate(const SeirModel& m, const SeirState& init, const SimulateOptions& opts) {
    m.validate();
    const Eigen::Index n = m.groups();
    if (init.s.size() != n || init.e.size() != n || init.z.size() != n || init.r.size() != n) {
        throw InputError("initial state dimensions disagree with the model");
    }
    if ((init.s.array() < 0).any() || (init.e.array() < 0).any() ||
        (init.z.array() < 0).any() || (init.r.array() < 0).any()) {
        throw InputError("initial state must be non-negative");
    }
    if (!(opts.dt > 0.0) || !(opts.t_max > 0.0) || opts.record_stride < 1) {
        throw InputError("simulate: dt and t_max must be positive, record_stride >= 1");
    }

    Eigen::VectorXd s = init.s, e = init.e, z = init.z, r = init.r;
    const double population = s.sum() + e.sum() + z.sum() + r.sum();
    const double floor = opts.infection_floor_frac * population;
    const double negativity_tol = 1e-6 * std::max(population, 1.0);

    Trajectory traj;
    traj.groups = n;
    traj.total_population = population;
    traj.s0_total = m.s0.sum();

    auto pack = [&]() {
        Eigen::VectorXd state(4 * n);
        state << s, e, z, r;
        return state;
    };
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(pack());
    };

    double infections = e.sum() + z.sum();
    traj.peak_infections = infections;
    traj.peak_time = 0.0;
    record(0.0);

    const long steps = static_cast<long>(std::ceil(opts.t_max / opts.dt));
    double t = 0.0;
    long step = 0;
    for (; step < steps; ++step) {
        const double h = opts.dt;
        const Derivatives k1 = rhs(m, s, e, z);
        const Derivatives k2 = rhs(m, s + 0.5 * h * k1.ds, e + 0.5 * h * k1.de, z + 0.5 * h * k1.dz);
        const Derivatives k3 = rhs(m, s + 0.5 * h * k2.ds, e + 0.5 * h * k2.de, z + 0.5 * h * k2.dz);
        const Derivatives k4 = rhs(m, s + h * k3.ds, e + h * k3.de, z + h * k3.dz);
        const double w = h / 6.0;
        s += w * (k1.ds + 2 * k2.ds + 2 * k3.ds + k4.ds);
        e += w * (k1.de + 2 * k2.de + 2 * k3.de + k4.de);
        z += w * (k1.dz + 2 * k2.dz + 2 * k3.dz + k4.dz);
        r += w * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr);
        t += h;

        const double min_coeff = std::min({s.minCoeff(), e.minCoeff(), z.minCoeff(), r.minCoeff()});
        if (min_coeff < -negativity_tol) {
            std::ostringstream msg;
            msg << "state went negative (" << min_coeff << ") at t = " << t
                << "; reduce dt below " << opts.dt;
            throw SolverError(msg.str());
        }

        const double prev_infections = infections;
        infections = e.sum() + z.sum();
        if (infections > traj.peak_infections) {
            traj.peak_infections = infections;
            traj.peak_time = t;
        }
        traj.max_conservation_error = std::max(
            traj.max_conservation_error,
            std::abs((s.sum() + e.sum() + z.sum() + r.sum()) / population - 1.0));

        if ((step + 1) % opts.record_stride == 0) record(t);

        if (infections < floor && infections <= prev_infections) {
            traj.converged = true;
            break;
        }
    }
    if (traj.times.back() != t) record(t);
    traj.final_state = pack();
    return traj;
}

TrajectoryMetrics trajectory_metrics(const Trajectory& t) {
    if (t.states.empty()) {
        throw InputError("empty trajectory");
    }
    TrajectoryMetrics metrics;
    metrics.peak_infections = t.peak_infections;
    const Eigen::Index n = t.groups;
    metrics.cumulative_infections = t.s0_total - t.final_state.head(n).sum();
    metrics.provisional = !t.converged;
    return metrics;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write trajectory CSV: " + path.string());
    }
    const Eigen::Index n = t.groups;
    out << "t";
    const char* blocks[] = {"s", "e", "z", "r"};
    for (const char* b : blocks) {
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << b << '[' << i << ']';
    }
    out << '\n' << std::setprecision(17);
    for (size_t k = 0; k < t.times.size(); ++k) {
        out << t.times[k];
        for (Eigen::Index j = 0; j < 4 * n; ++j) out << ',' << t.states[k](j);
        out << '\n';
    }
}

CompartmentalFields seir_fields(const SeirModel& m) {
    m.validate();
    const Eigen::Index n = m.groups();
    CompartmentalFields fields;
    fields.n_infected = 2 * n;
    fields.n_noninfected = 2 * n;
    // x = (e, z), y = (s, r)
    fields.new_infections = [m, n](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
        out.head(n) = m.beta.cwiseProduct(y.head(n)).cwiseProduct(m.contacts.m() * x.tail(n));
        return out;
    };
    fields.transitions = [m, n](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
        Eigen::VectorXd out(2 * n);
        out.head(n) = -m.gamma.cwiseProduct(x.head(n));
        out.tail(n) = m.gamma.cwiseProduct(x.head(n)) - m.delta.cwiseProduct(x.tail(n));
        return out;
    };
    fields.noninfected = [m, n](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        Eigen::VectorXd out(2 * n);
        out.head(n) = -m.beta.cwiseProduct(y.head(n)).cwiseProduct(m.contacts.m() * x.tail(n));
        out.tail(n) = m.delta.cwiseProduct(x.tail(n));
        return out;
    };
    return fields;
}

bool AssumptionReport::regularity_pass() const {
    return new_infections_nonneg.pass && zero_when_disease_free.pass &&
           no_outflow_from_empty_infected.pass && no_outflow_from_empty_noninfected.pass;
}

AssumptionReport validate_assumptions(
    const CompartmentalFields& fields,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples,
    const std::optional<Eigen::VectorXd>& y_star, double tol) {
    AssumptionReport report;
    auto fail = [](ConditionReport& c, const std::string& detail) {
        if (c.pass) {
            c.pass = false;
            c.detail = detail;
        }
    };

    const Eigen::Index nx = fields.n_infected;
    for (size_t k = 0; k < samples.size(); ++k) {
        const auto& [x, y] = samples[k];
        const Eigen::VectorXd f = fields.new_infections(x, y);
        if ((f.array() < -tol).any()) {
            fail(report.new_infections_nonneg,
                 "f has a negative component at sample " + std::to_string(k));
        }
        const Eigen::VectorXd zero_x = Eigen::VectorXd::Zero(nx);
        if (fields.new_infections(zero_x, y).cwiseAbs().maxCoeff() > tol ||
            fields.transitions(zero_x, y).cwiseAbs().maxCoeff() > tol) {
            fail(report.zero_when_disease_free,
                 "f or v nonzero at x = 0 for sample " + std::to_string(k));
        }
        // Zero out one infected coordinate at a time and check its v-inflow.
        for (Eigen::Index i = 0; i < nx; ++i) {
            Eigen::VectorXd xz = x;
            xz(i) = 0.0;
            if (fields.transitions(xz, y)(i) < -tol) {
                fail(report.no_outflow_from_empty_infected,
                     "v_" + std::to_string(i) + " < 0 with x_i = 0 at sample " +
                         std::to_string(k));
            }
        }
        for (Eigen::Index j = 0; j < fields.n_noninfected; ++j) {
            Eigen::VectorXd yz = y;
            yz(j) = 0.0;
            if (fields.noninfected(x, yz)(j) < -tol) {
                fail(report.no_outflow_from_empty_noninfected,
                     "g_" + std::to_string(j) + " < 0 with y_j = 0 at sample " +
                         std::to_string(k));
            }
        }
    }

    if (y_star) {
        const Eigen::Index ny = fields.n_noninfected;
        const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nx);
        auto stacked = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
            Eigen::VectorXd out(nx + ny);
            out.head(nx) = fields.transitions(x, y);
            out.tail(ny) = fields.noninfected(x, y);
            return out;
        };
        const double h = 1e-6;
        Eigen::MatrixXd jac(nx + ny, nx + ny);
        for (Eigen::Index c = 0; c < nx + ny; ++c) {
            Eigen::VectorXd xp = x0, xm = x0, yp = *y_star, ym = *y_star;
            if (c < nx) {
                xp(c) += h;
                xm(c) -= h;
            } else {
                yp(c - nx) += h;
                ym(c - nx) -= h;
            }
            jac.col(c) = (stacked(xp, yp) - stacked(xm, ym)) / (2.0 * h);
        }
        report.has_equilibrium_check = true;
        report.equilibrium_abscissa = spectral_abscissa(SquareMatrix(jac));
        report.equilibrium_hurwitz = report.equilibrium_abscissa < -kHurwitzTol;
    }
    return report;
}

}  // namespace r0gp
