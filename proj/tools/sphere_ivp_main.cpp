#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sphereivp/experiments.hpp"

namespace {

using namespace sphereivp;

struct CommonOpts {
    std::vector<std::string> methods;
    std::string problem;
    std::vector<double> h_values;
    double t_final = 0.0;
    std::string out;
    std::vector<double> p0;
    std::uint64_t seed = 0;
    bool full = false;
};

void add_common(CLI::App* sub, CommonOpts& o, const std::string& default_problem,
                const std::string& default_out) {
    o.problem = default_problem;
    o.out = default_out;
    // Free the short -h so the step-size option can be spelled --h.
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--method", o.methods,
                    "comma-separated methods: sfe, sbe-fp, sbe, pbe3, pbe, scn, scn-fwd")
        ->delimiter(',');
    sub->add_option("--problem", o.problem,
                    "problem key: four-vortex, stiff-attractor, rigid-body, perturbed-top")
        ->capture_default_str();
    sub->add_option("--h", o.h_values, "comma-separated step sizes")->delimiter(',');
    sub->add_option("--t-final", o.t_final, "integration horizon (0 = experiment default)");
    sub->add_option("--out", o.out, "output CSV path or stem")->capture_default_str();
    sub->add_option("--p0", o.p0, "start state x,y,z (normalized on input)")
        ->delimiter(',')
        ->expected(3);
}

ExperimentConfig make_config(ExperimentKind kind, const CommonOpts& o) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    for (const auto& name : o.methods) cfg.methods.push_back(parse_method(name));
    cfg.problem = o.problem;
    cfg.h_values = o.h_values;
    cfg.t_final = o.t_final;
    cfg.out_path = o.out;
    if (!o.p0.empty()) cfg.start = Vec3{o.p0[0], o.p0[1], o.p0[2]};
    cfg.full_run = o.full;
    return cfg;
}

std::string flags(bool tainted, bool failed) {
    std::string s;
    if (tainted) s += " [tainted: step retries were needed]";
    if (failed) s += " [failed: retries exhausted, series truncated]";
    return s;
}

int run_convergence_cmd(const ExperimentConfig& cfg) {
    const ConvergenceReport report = run_convergence(cfg);
    std::printf("# convergence problem=%s reference_gap=%.3e min_tested_error=%.3e\n",
                cfg.problem.c_str(), report.reference_gap, report.min_tested_error);
    for (const auto& mc : report.per_method) {
        std::printf("method=%-7s slope=%7.4f fit_residual=%.3f errors:", to_string(mc.method).c_str(),
                    mc.fit.slope, mc.fit.residual);
        for (const auto& [h, e] : mc.errors) std::printf(" %g:%.3e", h, e);
        std::printf("\n");
    }
    if (!cfg.out_path.empty()) {
        emit_csv(report, cfg.out_path);
        std::printf("wrote %s\n", cfg.out_path.c_str());
    }
    return 0;
}

int run_stability_cmd(const ExperimentConfig& cfg) {
    const std::vector<StabilityRun> runs = run_stability(cfg);
    bool bad = false;
    for (const auto& run : runs) {
        const double final_dist = run.dist.empty() ? -1.0 : run.dist.back();
        std::printf("method=%-7s h=%-6g verdict=%-9s final_dist=%.3e retries=%zu%s\n",
                    to_string(run.method).c_str(), run.h, to_string(run.verdict).c_str(),
                    final_dist, run.retries.size(), flags(run.tainted, run.failed).c_str());
        if (!cfg.out_path.empty()) {
            const std::string path = expanded_out_path(cfg.out_path, run.method, run.h);
            emit_csv(run, path);
            std::printf("wrote %s\n", path.c_str());
        }
        bad = bad || run.tainted || run.failed;
    }
    return bad ? 1 : 0;
}

int run_hamiltonian_cmd(const ExperimentConfig& cfg) {
    const std::vector<HamiltonianRun> runs = run_hamiltonian(cfg);
    bool bad = false;
    for (const auto& run : runs) {
        std::printf("method=%-7s h=%-6g max_rel_energy_err=%.6e final=%.6e retries=%zu%s\n",
                    to_string(run.method).c_str(), run.h, run.max_drift,
                    run.drift.empty() ? -1.0 : run.drift.back(), run.retries.size(),
                    flags(run.tainted, run.failed).c_str());
        if (!cfg.out_path.empty()) {
            const std::string path = expanded_out_path(cfg.out_path, run.method, run.h);
            emit_csv(run.trajectory, path);
            std::printf("wrote %s\n", path.c_str());
        }
        bad = bad || run.tainted || run.failed;
    }
    return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark driver for geometric integrators on the unit sphere"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    app.footer("problems: four-vortex, stiff-attractor, rigid-body, perturbed-top");

    CommonOpts conv_opts, stab_opts, ham_opts;

    CLI::App* conv = app.add_subcommand(
        "convergence", "final-state error versus step size against a fine reference run");
    add_common(conv, conv_opts, "four-vortex", "convergence.csv");

    CLI::App* stab = app.add_subcommand(
        "stability", "long-horizon attractor capture at step sizes around the explicit threshold");
    add_common(stab, stab_opts, "stiff-attractor", "stability.csv");
    stab->add_option("--seed", stab_opts.seed,
                     "random unit start away from the coordinate equilibria");

    CLI::App* ham = app.add_subcommand(
        "hamiltonian", "relative energy drift along a conservative flow");
    add_common(ham, ham_opts, "rigid-body", "hamiltonian.csv");
    ham->add_flag("--full", ham_opts.full,
                  "run the full benchmark horizon instead of the short default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (conv->parsed()) return run_convergence_cmd(make_config(ExperimentKind::Convergence, conv_opts));
        if (stab->parsed()) {
            ExperimentConfig cfg = make_config(ExperimentKind::Stability, stab_opts);
            if (stab->count("--seed")) cfg.seed = stab_opts.seed;
            return run_stability_cmd(cfg);
        }
        if (ham->parsed()) return run_hamiltonian_cmd(make_config(ExperimentKind::Hamiltonian, ham_opts));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
