// Command-line front end: configuration, orchestration, CSV emission.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "acceptance_suite.hpp"
#include "nlfront/io.hpp"
#include "nlfront/macro.hpp"

namespace fs = std::filesystem;
using namespace nlfront;

namespace {

constexpr const char* kVersion = "nlfront 1.0";

struct RunConfig {
    double beta = 1.5;
    double L = 20.0;
    int n_points = 801;
    std::string boundary = "truncated_line";
    double epsilon = 0.05;
    double R = 1.0;
    double T = 1.0;
    double S = 50.0;
    double kappa = 2.0;
    double lambda = 1.0;
    double zeta = 0.0;  // 0: use 0.2 m_beta
    double ell_minus = 1.0;
    double ell_plus = 4.0;
    double alpha_star = 0.01;
    double dt = 0.02;
    std::string output_dir = "out";
    unsigned long long seed = 12345;
};

void add_config_options(CLI::App& app, RunConfig& cfg) {
    app.set_config("--config", "", "plain key = value configuration file");
    app.add_option("--beta", cfg.beta, "inverse temperature (> 1)");
    app.add_option("--L", cfg.L, "grid half-length");
    app.add_option("--n-points", cfg.n_points, "grid points (odd)");
    app.add_option("--boundary", cfg.boundary, "truncated_line | neumann");
    app.add_option("--eps", cfg.epsilon, "scale parameter epsilon");
    app.add_option("--R", cfg.R, "macroscopic displacement");
    app.add_option("--T", cfg.T, "macroscopic time");
    app.add_option("--S", cfg.S, "time slab length");
    app.add_option("--kappa", cfg.kappa, "delta(eps) exponent");
    app.add_option("--lambda", cfg.lambda, "Delta(eps) exponent (< kappa)");
    app.add_option("--zeta", cfg.zeta, "phase accuracy (0: 0.2 m_beta)");
    app.add_option("--ell-minus", cfg.ell_minus, "fine coarse-graining length");
    app.add_option("--ell-plus", cfg.ell_plus, "block length");
    app.add_option("--alpha-star", cfg.alpha_star, "center-mask threshold");
    app.add_option("--dt", cfg.dt, "integration step");
    app.add_option("--output-dir,-o", cfg.output_dir, "output directory");
    app.add_option("--seed", cfg.seed, "seed for randomized suites");
}

struct Session {
    RunConfig cfg;
    Grid1D grid;
    ModelParams params;
    InstantonData inst;
    AnalysisParams aparams;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Session(const RunConfig& c)
        : cfg(c),
          grid(Grid1D::make(c.L, c.n_points,
                            c.boundary == "neumann" ? BoundaryMode::Neumann
                                                    : BoundaryMode::TruncatedLine)),
          params(ModelParams::make(c.beta, grid)),
          inst(compute_instanton(params, grid)),
          aparams(AnalysisParams::make(c.epsilon, inst, params)) {
        if (!(c.lambda < c.kappa)) throw DomainError("need lambda < kappa");
        aparams.kappa = c.kappa;
        aparams.lambda = c.lambda;
        const double le = std::abs(std::log(c.epsilon));
        aparams.delta = std::pow(le, -c.kappa);
        aparams.Delta = std::pow(le, -c.lambda);
        aparams.slab_S = c.S;
        aparams.alpha_star = c.alpha_star;
        aparams.ell_minus = c.ell_minus;
        aparams.ell_plus = c.ell_plus;
        if (c.zeta > 0.0) aparams.zeta = c.zeta;
        fs::create_directories(cfg.output_dir);
    }

    std::ofstream csv(const std::string& name, const std::string& header) {
        std::ofstream out(fs::path(cfg.output_dir) / name);
        if (!out) throw DomainError("cannot write to " + cfg.output_dir);
        out << header << '\n';
        return out;
    }

    void manifest(const std::string& subcommand) {
        std::ofstream out(fs::path(cfg.output_dir) / "manifest.txt");
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << "version = " << kVersion << "\n";
        out << "subcommand = " << subcommand << "\n";
        out << "beta = " << format_double(cfg.beta) << "\n";
        out << "L = " << format_double(cfg.L) << "\n";
        out << "n_points = " << cfg.n_points << "\n";
        out << "boundary = " << cfg.boundary << "\n";
        out << "epsilon = " << format_double(cfg.epsilon) << "\n";
        out << "R = " << format_double(cfg.R) << "\n";
        out << "T = " << format_double(cfg.T) << "\n";
        out << "S = " << format_double(cfg.S) << "\n";
        out << "kappa = " << format_double(cfg.kappa) << "\n";
        out << "lambda = " << format_double(cfg.lambda) << "\n";
        out << "zeta = " << format_double(aparams.zeta) << "\n";
        out << "ell_minus = " << format_double(cfg.ell_minus) << "\n";
        out << "ell_plus = " << format_double(cfg.ell_plus) << "\n";
        out << "alpha_star = " << format_double(cfg.alpha_star) << "\n";
        out << "dt = " << format_double(cfg.dt) << "\n";
        out << "seed = " << cfg.seed << "\n";
        out << "wall_seconds = " << format_double(wall) << "\n";
    }
};

int cmd_instanton(const RunConfig& cfg) {
    Session s(cfg);
    write_profile_csv(s.inst.profile, (fs::path(cfg.output_dir) / "instanton.csv").string());
    write_profile_csv(s.inst.derivative,
                      (fs::path(cfg.output_dir) / "instanton_derivative.csv").string());
    std::ofstream info(fs::path(cfg.output_dir) / "instanton_info.txt");
    info << "m_beta = " << format_double(s.inst.m_beta) << "\n";
    info << "residual = " << format_double(s.inst.residual) << "\n";
    info << "alpha = " << format_double(s.inst.decay_alpha) << "\n";
    info << "a = " << format_double(s.inst.decay_a) << "\n";
    info << "F = " << format_double(s.inst.free_energy) << "\n";
    info << "norm_mprime_nu_sq = " << format_double(s.inst.norm_mprime_nu_sq) << "\n";
    info << "mobility = " << format_double(mobility(s.inst)) << "\n";
    std::cout << "instanton: F = " << s.inst.free_energy << ", alpha = " << s.inst.decay_alpha
              << ", outputs in " << cfg.output_dir << "\n";
    s.manifest("instanton");
    return 0;
}

int cmd_action_eval(const RunConfig& cfg, const std::string& traj_dir) {
    Session s(cfg);
    Trajectory traj = read_trajectory(traj_dir);
    ModelParams p = ModelParams::make(cfg.beta, traj.grid);
    CostReport rep = classify_slabs(traj, p, s.aparams.slab_S, s.aparams.delta);
    auto out = s.csv("slabs.csv", "slab,cost,good");
    for (size_t j = 0; j < rep.slab_cost.size(); ++j)
        out << j << ',' << format_double(rep.slab_cost[j]) << ',' << (rep.slab_good[j] ? 1 : 0)
            << '\n';
    auto tot = s.csv("action_totals.csv",
                     "total,l2_cost,dF_term,clip_term,slack,bad_count,delta,slab_S");
    tot << format_double(rep.total) << ',' << format_double(rep.l2_cost) << ','
        << format_double(rep.reversibility.dF_term) << ','
        << format_double(rep.reversibility.clip_term) << ','
        << format_double(rep.reversibility.slack) << ',' << rep.bad_count << ','
        << format_double(s.aparams.delta) << ',' << format_double(s.aparams.slab_S) << '\n';
    std::cout << "action: total = " << rep.total << ", bad slabs = " << rep.bad_count << "\n";
    s.manifest("action-eval");
    return 0;
}

int cmd_contours(const RunConfig& cfg, const std::string& profile_file) {
    Session s(cfg);
    Profile m = read_profile_csv(profile_file);
    ModelParams p = ModelParams::make(cfg.beta, m.grid);
    InstantonData inst = m.grid.compatible(s.grid) ? s.inst : compute_instanton(p, m.grid);
    ContourDecomposition cd = extract_contours(m, s.aparams, inst, p);
    auto out = s.csv("contours.csv", "x_lo,x_hi,kind,peierls_weight");
    for (const auto& c : cd.contours) {
        const char* kind = c.kind == ContourKind::Plus            ? "plus"
                           : c.kind == ContourKind::Minus         ? "minus"
                           : c.kind == ContourKind::MixedMinusPlus ? "mixed-+"
                                                                   : "mixed+-";
        out << format_double(c.x_lo) << ',' << format_double(c.x_hi) << ',' << kind << ','
            << format_double(c.peierls_weight) << '\n';
    }
    std::cout << "contours: " << cd.contours.size() << " total, " << cd.mixed_count()
              << " mixed (c1~" << cd.c1_surrogate << ", c2~" << cd.c2_surrogate << ")\n";
    s.manifest("contours");
    return 0;
}

int cmd_centers(const RunConfig& cfg, const std::string& profile_file) {
    Session s(cfg);
    Profile m = read_profile_csv(profile_file);
    ModelParams p = ModelParams::make(cfg.beta, m.grid);
    InstantonData inst = m.grid.compatible(s.grid) ? s.inst : compute_instanton(p, m.grid);
    CenterSet cs = find_centers(m, inst, s.aparams, p);
    auto out = s.csv("centers.csv", "index,xi,sigma,residual");
    for (size_t i = 0; i < cs.xi.size(); ++i)
        out << i << ',' << format_double(cs.xi[i]) << ',' << cs.sigma[i] << ','
            << format_double(cs.residual[i]) << '\n';
    std::cout << "centers: " << cs.xi.size() << " found\n";
    s.manifest("centers");
    return 0;
}

int cmd_spectral_gap(const RunConfig& cfg) {
    Session s(cfg);
    SpectralGapResult sg = spectral_gap(s.inst, s.params);
    auto out = s.csv("spectral_gap.csv", "omega,goldstone_residual,iterations");
    out << format_double(sg.omega) << ',' << format_double(sg.goldstone_residual) << ','
        << sg.iterations << '\n';
    std::cout << "omega = " << sg.omega << " (goldstone residual " << sg.goldstone_residual
              << ")\n";
    s.manifest("spectral-gap");
    return 0;
}

int cmd_optimize(const RunConfig& cfg, bool verify) {
    Session s(cfg);
    MacroProblem pr = MacroProblem::make(cfg.R, cfg.T, cfg.epsilon, s.inst);
    OptimalCount oc = optimal_nucleation_count(pr);
    auto out = s.csv("wn_table.csv", "n,w_n");
    const int n_max = std::max(oc.n + 3, 6);
    for (int n = 0; n <= n_max; ++n) out << n << ',' << format_double(macro_cost(pr, n)) << '\n';
    std::cout << "minimizer: n = " << oc.n << ", w = " << oc.w << " (mu = " << pr.mu
              << ", F = " << pr.F_bar << ", P = " << pr.P << ")\n";
    if (verify) {
        s.aparams.budget_P = pr.P;
        s.aparams.n_star = static_cast<int>(std::floor(1.0 + 2.0 * pr.P / pr.F_bar));
        StrategyResult sr = build_upper_bound_strategy(pr, oc.n, s.inst, s.params, s.aparams,
                                                       0.25);
        std::cout << "constructed n = " << oc.n << " action = " << sr.action_total
                  << " (ratio to w_n: " << sr.action_total / oc.w << ")\n";
        auto vo = s.csv("strategy_action.csv", "n,action,nucleation_cost,transport_cost,w_n");
        vo << oc.n << ',' << format_double(sr.action_total) << ','
           << format_double(sr.nucleation_cost) << ',' << format_double(sr.transport_cost) << ','
           << format_double(oc.w) << '\n';
    }
    s.manifest("optimize");
    return 0;
}

int cmd_strategy(const RunConfig& cfg, int n, const std::string& traj_out) {
    Session s(cfg);
    MacroProblem pr = MacroProblem::make(cfg.R, cfg.T, cfg.epsilon, s.inst);
    s.aparams.budget_P = pr.P;
    s.aparams.n_star = static_cast<int>(std::floor(1.0 + 2.0 * pr.P / pr.F_bar));
    StrategyResult sr = build_upper_bound_strategy(pr, n, s.inst, s.params, s.aparams, 0.25);
    auto out = s.csv("strategy_summary.csv", "n,action,nucleation_cost,transport_cost");
    out << n << ',' << format_double(sr.action_total) << ','
        << format_double(sr.nucleation_cost) << ',' << format_double(sr.transport_cost) << '\n';
    auto ev = s.csv("strategy_events.csv", "time,kind,index,position");
    for (const auto& e : sr.schedule.events)
        ev << format_double(e.time) << ','
           << (e.kind == ParticleEvent::Nucleation ? "nucleation" : "collision") << ',' << e.index
           << ',' << format_double(e.position) << '\n';
    if (!traj_out.empty()) write_trajectory(sr.traj, traj_out);
    std::cout << "strategy n = " << n << ": action = " << sr.action_total << "\n";
    s.manifest("strategy");
    return 0;
}

int cmd_particle_model(const RunConfig& cfg, const std::string& schedule_file) {
    Session s(cfg);
    MacroProblem pr = MacroProblem::make(cfg.R, cfg.T, cfg.epsilon, s.inst);
    s.aparams.budget_P = pr.P;
    s.aparams.n_star = static_cast<int>(std::floor(1.0 + 2.0 * pr.P / pr.F_bar));
    // event list: time,kind,index,position; paths are rebuilt as optimal
    // constant-speed motions between the events
    std::ifstream in(schedule_file);
    if (!in) throw DomainError("cannot open " + schedule_file);
    std::string line;
    std::getline(in, line);
    int births = 0;
    ParticleSchedule sched;
    sched.horizon = pr.meso_horizon();
    std::vector<ParticleEvent> events;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ParticleEvent e;
        char kind[32] = {0};
        if (std::sscanf(line.c_str(), "%lf,%31[^,],%d,%lf", &e.time, kind, &e.index,
                        &e.position) != 4)
            throw DomainError("malformed schedule row: " + line);
        e.kind = std::string(kind) == "nucleation" ? ParticleEvent::Nucleation
                                                   : ParticleEvent::Collision;
        births += e.kind == ParticleEvent::Nucleation;
        events.push_back(e);
    }
    sched = make_optimal_schedule(pr, births, s.aparams);
    sched.events = events;
    ParticleResult res = simulate_particles(pr, sched, s.aparams);
    auto out = s.csv("particle_result.csv",
                     "total_displacement,required,correction,lower_bound_cost,error_terms,feasible");
    out << format_double(res.total_displacement) << ',' << format_double(res.required) << ','
        << format_double(res.correction) << ',' << format_double(res.lower_bound_cost) << ','
        << format_double(res.error_terms) << ',' << (res.feasible ? 1 : 0) << '\n';
    std::cout << "particle model: displacement " << res.total_displacement << " vs required "
              << res.required << (res.feasible ? " (feasible)" : " (infeasible)")
              << ", lower bound " << res.lower_bound_cost << "\n";
    s.manifest("particle-model");
    if (!res.feasible) throw AuditError("particle schedule infeasible");
    return 0;
}

int cmd_audit(const RunConfig& cfg, const std::string& traj_dir) {
    Session s(cfg);
    Trajectory traj = read_trajectory(traj_dir);
    ModelParams p = ModelParams::make(cfg.beta, traj.grid);
    InstantonData inst = traj.grid.compatible(s.grid) ? s.inst : compute_instanton(p, traj.grid);
    CostReport rep = classify_slabs(traj, p, s.aparams.slab_S, s.aparams.delta);
    BadIntervalAudit audit = audit_bad_intervals(traj, rep, inst, p, s.aparams);
    auto out = s.csv("bad_intervals.csv", "t_lo,t_hi,delta_sum,l2_dev_sq,bound,center_disp,ok");
    bool all_ok = true;
    for (const auto& c : audit.components) {
        out << format_double(c.t_lo) << ',' << format_double(c.t_hi) << ','
            << format_double(c.delta_sum) << ',' << format_double(c.l2_dev_sq) << ','
            << format_double(c.bound) << ',' << format_double(c.center_disp) << ','
            << (c.within_bound ? 1 : 0) << '\n';
        all_ok = all_ok && c.within_bound;
    }
    std::cout << "audit: " << audit.components.size() << " bad components, total displacement "
              << audit.total_center_disp << " (|log eps|^2 = " << audit.log_eps_sq << ")\n";
    s.manifest("audit");
    if (!all_ok) throw AuditError("bad-interval deviation bound violated");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal interface dynamics: instantons, action functionals, optimal motion"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    RunConfig cfg;
    add_config_options(app, cfg);

    auto* c_inst = app.add_subcommand("instanton", "compute the standing interface profile");
    auto* c_action = app.add_subcommand("action-eval", "score a trajectory with the cost functional");
    std::string traj_dir;
    c_action->add_option("--traj", traj_dir, "trajectory directory")->required();
    auto* c_cont = app.add_subcommand("contours", "contour decomposition of a profile");
    std::string profile_file;
    c_cont->add_option("--profile", profile_file, "profile CSV")->required();
    auto* c_cent = app.add_subcommand("centers", "interface centers of a profile");
    std::string profile_file2;
    c_cent->add_option("--profile", profile_file2, "profile CSV")->required();
    auto* c_gap = app.add_subcommand("spectral-gap", "linearized-operator gap");
    auto* c_opt = app.add_subcommand("optimize", "w_n table and optimal nucleation count");
    bool verify = false;
    c_opt->add_flag("--verify", verify, "also build and score the optimal strategy");
    auto* c_strat = app.add_subcommand("strategy", "build the 2n+1-front displacement strategy");
    int strat_n = 0;
    std::string strat_out;
    c_strat->add_option("--n", strat_n, "number of nucleations")->required();
    c_strat->add_option("--traj-out", strat_out, "write the trajectory to this directory");
    auto* c_part = app.add_subcommand("particle-model", "evaluate a front-particle schedule");
    std::string schedule_file;
    c_part->add_option("--schedule", schedule_file, "event CSV (time,kind,index,position)")
        ->required();
    auto* c_audit = app.add_subcommand("audit", "bad-interval displacement audit");
    std::string audit_dir;
    c_audit->add_option("--traj", audit_dir, "trajectory directory")->required();
    auto* c_self = app.add_subcommand("selftest", "run the acceptance suite");
    std::vector<int> criteria;
    c_self->add_option("--criterion", criteria, "run only these criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 64;
    }

    try {
        if (app.got_subcommand(c_inst)) return cmd_instanton(cfg);
        if (app.got_subcommand(c_action)) return cmd_action_eval(cfg, traj_dir);
        if (app.got_subcommand(c_cont)) return cmd_contours(cfg, profile_file);
        if (app.got_subcommand(c_cent)) return cmd_centers(cfg, profile_file2);
        if (app.got_subcommand(c_gap)) return cmd_spectral_gap(cfg);
        if (app.got_subcommand(c_opt)) return cmd_optimize(cfg, verify);
        if (app.got_subcommand(c_strat)) return cmd_strategy(cfg, strat_n, strat_out);
        if (app.got_subcommand(c_part)) return cmd_particle_model(cfg, schedule_file);
        if (app.got_subcommand(c_audit)) return cmd_audit(cfg, audit_dir);
        if (app.got_subcommand(c_self))
            return acceptance::run_suite(criteria, cfg.seed) ? 0 : 3;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 2;
    } catch (const AuditError& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
