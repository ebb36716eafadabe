#include "experiment.hpp"

#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace r0gp::tools {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

SolverOptions parse_solver(const json& j) {
    SolverOptions opts;
    if (!j.is_object()) return opts;
    opts.duality_gap = j.value("duality_gap", opts.duality_gap);
    opts.max_newton_steps = j.value("max_newton_steps", opts.max_newton_steps);
    opts.phase1_feastol = j.value("phase1_feastol", opts.phase1_feastol);
    opts.log_box = j.value("log_box", opts.log_box);
    return opts;
}

std::vector<double> parse_grid(const json& j, const char* what) {
    // Either an explicit array of values or {"lo":, "hi":, "count":}.
    if (j.is_array()) {
        std::vector<double> values = j.get<std::vector<double>>();
        if (values.empty()) throw InputError(std::string(what) + " grid must be non-empty");
        return values;
    }
    if (j.is_object()) {
        return linspace(j.at("lo").get<double>(), j.at("hi").get<double>(),
                        j.at("count").get<int>());
    }
    throw InputError(std::string(what) + " grid must be an array or {lo, hi, count}");
}

struct MethodOutcome {
    double r0_post, abscissa_post, cost, vaccine, antidote, peak, cumulative, conservation;
};

MethodOutcome evaluate_allocation(const PharmaModel& pm, const Assignment& theta) {
    MethodOutcome out;
    const SeirModel post = pm.apply(theta);
    out.r0_post = r0_eigen(linearize(post));
    out.abscissa_post = seir_spectral_abscissa(post);
    out.vaccine = pm.vaccine_cost_total(theta);
    out.antidote = pm.antidote_cost_total(theta);
    out.cost = out.vaccine + out.antidote;
    const Trajectory traj =
        simulate(post, seeded_init(post), {.dt = 0.05, .t_max = 5000.0, .record_stride = 1 << 30});
    const TrajectoryMetrics metrics = trajectory_metrics(traj);
    out.peak = metrics.peak_infections;
    out.cumulative = metrics.cumulative_infections;
    out.conservation = traj.max_conservation_error;
    return out;
}

void require_optimal(const AllocationResult& res, const std::string& what) {
    if (res.status == SolveStatus::infeasible) {
        throw SolverError(what + ": allocation reported infeasible");
    }
    if (res.status != SolveStatus::optimal) {
        throw SolverError(what + ": allocation reported " + to_string(res.status));
    }
}

template <typename Fn>
void parallel_for(size_t count, int jobs, Fn&& body) {
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string csv_number(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace

const SeirModel& LoadedModel::require_seir(const char* what) const {
    if (!seir) {
        throw InputError(std::string(what) + " requires a SEIR model config (rates + mobility)");
    }
    return *seir;
}

LinearizedEpidemic LoadedModel::linearize_or_get() const {
    if (linearized) return *linearized;
    return linearize(require_seir("r0"));
}

LoadedModel load_model_json(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("bad model JSON: ") + e.what());
    }
    LoadedModel out;
    if (j.contains("F") || j.contains("V")) {
        if (!j.contains("F") || !j.contains("V")) {
            throw InputError("direct model needs both F and V matrix files");
        }
        out.linearized = LinearizedEpidemic(
            read_matrix_csv(resolve(base_dir, j.at("F").get<std::string>())),
            read_matrix_csv(resolve(base_dir, j.at("V").get<std::string>())));
        return out;
    }

    const json mob_j = j.value("mobility", json::object());
    MobilityData mob = [&] {
        if (mob_j.contains("P")) {
            return read_mobility_csv(resolve(base_dir, mob_j.at("P").get<std::string>()),
                                     resolve(base_dir, mob_j.at("populations").get<std::string>()));
        }
        const Eigen::Index groups = j.value("groups", 5);
        const std::uint64_t seed = mob_j.value("seed", 7ULL);
        const MobilityKind kind =
            mobility_kind_from_string(mob_j.value("kind", std::string("gravity")));
        return synth_mobility(groups, seed, kind);
    }();

    const json rates_j = j.value("rates", json::object());
    const BaseRates rates{rates_j.value("beta", 0.1), rates_j.value("gamma", 0.2),
                          rates_j.value("delta", 0.1)};

    if (j.contains("alpha")) {
        out.alpha = j.at("alpha").get<double>();
    } else {
        const json cal = j.value("calibration", json::object());
        const BaseRates at{cal.value("beta", 0.1), cal.value("gamma", 0.2),
                           cal.value("delta", 0.1)};
        out.alpha = calibrate_alpha(mob, at, mob.populations,
                                    cal.value("target_r0", 2.5));
    }
    out.seir = make_uniform_seir(mob, rates, out.alpha);
    out.mobility = std::move(mob);
    return out;
}

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    json j = json::object();
    std::filesystem::path base_dir = std::filesystem::current_path();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open config: " + path);
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InputError(std::string("bad config JSON: ") + e.what());
        }
        base_dir = std::filesystem::absolute(path).parent_path();
    }
    cfg.model = load_model_json(j.value("model", json::object()).dump(), base_dir);
    const json iv = j.value("intervention", json::object());
    cfg.intervention.beta_max_reduction =
        iv.value("beta_max_reduction", cfg.intervention.beta_max_reduction);
    cfg.intervention.delta_max_speedup =
        iv.value("delta_max_speedup", cfg.intervention.delta_max_speedup);
    cfg.intervention.delta_tilde = iv.value("delta_tilde", cfg.intervention.delta_tilde);
    cfg.solver = parse_solver(j.value("solver", json::object()));
    cfg.seed = j.value("seed", cfg.seed);
    cfg.jobs = j.value("jobs", cfg.jobs);
    if (j.contains("sweep")) {
        const json s = j.at("sweep");
        if (s.contains("beta")) cfg.sweep.beta_values = parse_grid(s.at("beta"), "beta");
        if (s.contains("gamma")) cfg.sweep.gamma_values = parse_grid(s.at("gamma"), "gamma");
        if (s.contains("delta")) cfg.sweep.delta_values = parse_grid(s.at("delta"), "delta");
        cfg.sweep_budget = s.value("budget", cfg.sweep_budget);
    }
    if (j.contains("budgets")) cfg.budgets = j.at("budgets").get<std::vector<double>>();
    if (j.contains("curve_models")) {
        cfg.curve_models.clear();
        for (const auto& m : j.at("curve_models")) {
            cfg.curve_models.push_back(
                {m.at("beta").get<double>(), m.at("gamma").get<double>(),
                 m.at("delta").get<double>()});
        }
    }
    return cfg;
}

double seir_spectral_abscissa(const SeirModel& m) {
    const LinearizedEpidemic lin = linearize(m);
    return spectral_abscissa(SquareMatrix(lin.F().m() + lin.V().m()));
}

std::vector<SweepRow> run_sweep(const SeirModel& base, const SweepSpec& spec, double c_max,
                                const InterventionConfig& intervention,
                                const SolverOptions& solver, int jobs) {
    const std::vector<RateTriple> triples = generate_sweep(spec);
    std::vector<SweepRow> rows(triples.size());
    parallel_for(triples.size(), jobs, [&](size_t i) {
        const RateTriple& t = triples[i];
        SeirModel m = base;
        m.beta.setConstant(t.beta);
        m.gamma.setConstant(t.gamma);
        m.delta.setConstant(t.delta);
        const PharmaModel pm = build_pharma_model(
            m,
            default_interventions(m, intervention.beta_max_reduction,
                                  intervention.delta_max_speedup, intervention.delta_tilde),
            c_max);

        SweepRow row;
        row.index = static_cast<int>(i);
        row.beta = t.beta;
        row.gamma = t.gamma;
        row.delta = t.delta;
        row.r0_pre = r0_eigen(linearize(m));

        const AllocationResult r0min = solve_budget_constrained(pm.model(), c_max, solver);
        require_optimal(r0min, "sweep model " + std::to_string(i) + " (R0 objective)");
        const MethodOutcome a = evaluate_allocation(pm, r0min.theta_star);
        row.r0_post_r0min = a.r0_post;
        row.abscissa_post_r0min = a.abscissa_post;
        row.cost_r0min = a.cost;
        row.vaccine_cost_r0min = a.vaccine;
        row.antidote_cost_r0min = a.antidote;
        row.peak_r0min = a.peak;
        row.cumulative_r0min = a.cumulative;
        row.max_kkt = r0min.kkt_residual;
        row.max_conservation = a.conservation;

        const AllocationResult absmin =
            solve_abscissa_budget(pm.model(), c_max, pm.abscissa_shift(), solver);
        require_optimal(absmin, "sweep model " + std::to_string(i) + " (abscissa objective)");
        const MethodOutcome b = evaluate_allocation(pm, absmin.theta_star);
        row.r0_post_absmin = b.r0_post;
        row.abscissa_post_absmin = b.abscissa_post;
        row.cost_absmin = b.cost;
        row.vaccine_cost_absmin = b.vaccine;
        row.antidote_cost_absmin = b.antidote;
        row.peak_absmin = b.peak;
        row.cumulative_absmin = b.cumulative;
        row.max_kkt = std::max(row.max_kkt, absmin.kkt_residual);
        row.max_conservation = std::max(row.max_conservation, b.conservation);

        rows[i] = row;
    });
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write sweep CSV: " + path.string());
    out << "index,beta,gamma,delta,r0_pre,"
           "r0_post_r0min,abscissa_post_r0min,cost_r0min,vaccine_cost_r0min,"
           "antidote_cost_r0min,peak_r0min,cumulative_r0min,"
           "r0_post_absmin,abscissa_post_absmin,cost_absmin,vaccine_cost_absmin,"
           "antidote_cost_absmin,peak_absmin,cumulative_absmin,max_kkt,max_conservation\n";
    for (const auto& r : rows) {
        out << r.index;
        for (const double v :
             {r.beta, r.gamma, r.delta, r.r0_pre, r.r0_post_r0min, r.abscissa_post_r0min,
              r.cost_r0min, r.vaccine_cost_r0min, r.antidote_cost_r0min, r.peak_r0min,
              r.cumulative_r0min, r.r0_post_absmin, r.abscissa_post_absmin, r.cost_absmin,
              r.vaccine_cost_absmin, r.antidote_cost_absmin, r.peak_absmin,
              r.cumulative_absmin, r.max_kkt, r.max_conservation}) {
            out << ',' << csv_number(v);
        }
        out << '\n';
    }
}

std::vector<BudgetCurveRow> run_budget_curve(const MobilityData& mob, double alpha,
                                             const std::vector<BaseRates>& models,
                                             const std::vector<double>& budgets,
                                             const InterventionConfig& intervention,
                                             const SolverOptions& solver, int jobs) {
    struct Cell {
        int model_index;
        double budget;
    };
    std::vector<Cell> cells;
    for (size_t m = 0; m < models.size(); ++m) {
        for (const double b : budgets) {
            cells.push_back({static_cast<int>(m), b});
        }
    }
    std::vector<BudgetCurveRow> rows(2 * cells.size());
    parallel_for(cells.size(), jobs, [&](size_t i) {
        const Cell& cell = cells[i];
        const BaseRates& rates = models[static_cast<size_t>(cell.model_index)];
        const SeirModel m = make_uniform_seir(mob, rates, alpha);
        const PharmaModel pm = build_pharma_model(
            m,
            default_interventions(m, intervention.beta_max_reduction,
                                  intervention.delta_max_speedup, intervention.delta_tilde),
            cell.budget);

        auto fill = [&](const Assignment& theta, double kkt, const char* objective,
                        size_t slot) {
            const MethodOutcome o = evaluate_allocation(pm, theta);
            BudgetCurveRow row;
            row.model_index = cell.model_index;
            row.beta = rates.beta;
            row.gamma = rates.gamma;
            row.delta = rates.delta;
            row.budget = cell.budget;
            row.objective = objective;
            row.r0_post = o.r0_post;
            row.abscissa_post = o.abscissa_post;
            row.cost = o.cost;
            row.vaccine_cost = o.vaccine;
            row.antidote_cost = o.antidote;
            row.vaccine_share = (o.cost > 1e-12) ? o.vaccine / o.cost : 0.0;
            row.kkt = kkt;
            row.peak = o.peak;
            row.cumulative = o.cumulative;
            row.conservation = o.conservation;
            rows[slot] = std::move(row);
        };

        const AllocationResult r0min =
            solve_budget_constrained(pm.model(), cell.budget, solver);
        require_optimal(r0min, "budget curve (R0 objective)");
        fill(r0min.theta_star, r0min.kkt_residual, "r0", 2 * i);

        const AllocationResult absmin =
            solve_abscissa_budget(pm.model(), cell.budget, pm.abscissa_shift(), solver);
        require_optimal(absmin, "budget curve (abscissa objective)");
        fill(absmin.theta_star, absmin.kkt_residual, "abscissa", 2 * i + 1);
    });
    return rows;
}

void write_budget_curve_csv(const std::filesystem::path& path,
                            const std::vector<BudgetCurveRow>& rows) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write budget-curve CSV: " + path.string());
    out << "model_index,beta,gamma,delta,budget,objective,r0_post,abscissa_post,"
           "cost,vaccine_cost,antidote_cost,vaccine_share,peak,cumulative,kkt,"
           "conservation\n";
    for (const auto& r : rows) {
        out << r.model_index << ',' << csv_number(r.beta) << ',' << csv_number(r.gamma) << ','
            << csv_number(r.delta) << ',' << csv_number(r.budget) << ',' << r.objective;
        for (const double v : {r.r0_post, r.abscissa_post, r.cost, r.vaccine_cost,
                               r.antidote_cost, r.vaccine_share, r.peak, r.cumulative,
                               r.kkt, r.conservation}) {
            out << ',' << csv_number(v);
        }
        out << '\n';
    }
}

}  // namespace r0gp::tools
