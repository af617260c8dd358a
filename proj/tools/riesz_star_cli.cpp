// Command-line driver: steady solves, Lagrangian evolution, verification
// sweeps, and decay-rate fitting. Exit codes: 0 ok, 2 config/regime error,
// 3 stretch-guard trip, 4 verification failure, 5 degenerate fit,
// 1 anything else (non-convergence, I/O).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riesz_star/checks.hpp"
#include "riesz_star/diagnostics.hpp"
#include "riesz_star/io.hpp"
#include "riesz_star/scheme.hpp"
#include "riesz_star/steady.hpp"

namespace fs = std::filesystem;
using namespace riesz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitVerify = 4;
constexpr int kExitDegenerateFit = 5;

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + cfg.out_dir +
                          "': " + ec.message());
}

std::string file_hash(const fs::path& p) {
    std::FILE* f = std::fopen(p.string().c_str(), "rb");
    if (!f) return "";
    std::string bytes;
    char buf[1 << 14];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) bytes.append(buf, got);
    std::fclose(f);
    return hex64(fnv1a64(bytes));
}

int cmd_steady(const RunConfig& cfg) {
    cfg.params().validate(cfg.strict_regime);
    ensure_out_dir(cfg);
    const SteadyProfile prof =
        solve_steady(cfg.params(), cfg.n_grid, cfg.tol, cfg.relax);
    const fs::path dir(cfg.out_dir);
    const fs::path csv = dir / "steady_profile.csv";
    const fs::path hdr = dir / "steady_profile.json";
    write_profile(csv, hdr, prof);
    write_manifest(dir / "manifest.json", cfg,
                   {csv.filename().string(), hdr.filename().string()},
                   file_hash(csv), "completed", -1.0);
    std::printf("steady: converged in %d iterations, residual %s\n",
                prof.iterations, format_double(prof.fixed_point_residual).c_str());
    std::printf("steady: mass %s, radius %s, sup rho %s\n",
                format_double(prof.mass).c_str(), format_double(prof.radius).c_str(),
                format_double(prof.sup_rho()).c_str());
    std::printf("steady: wrote %s\n", csv.string().c_str());
    return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const std::string& profile_csv,
               const std::string& profile_json) {
    cfg.params().validate(cfg.strict_regime);
    ensure_out_dir(cfg);

    SteadyProfile prof;
    if (!profile_csv.empty()) {
        fs::path json_path = profile_json.empty()
                                 ? fs::path(profile_csv).replace_extension(".json")
                                 : fs::path(profile_json);
        prof = read_profile(profile_csv, json_path);
        if (std::fabs(prof.params.s - cfg.s) > 1e-12 ||
            std::fabs(prof.params.gamma - cfg.gamma) > 1e-12)
            throw ConfigError("profile file parameters do not match --s/--gamma");
        if (prof.n_half != cfg.n_grid)
            throw ConfigError("profile grid does not match --n");
    } else {
        // Canonical evolution frame: support rescaled to radius one.
        prof = rescale_to_radius(
            solve_steady(cfg.params(), cfg.n_grid, cfg.tol, cfg.relax), 1.0);
    }

    SchemeConfig sc;
    sc.n = prof.n_half;
    sc.dt = cfg.dt;
    sc.integrator = cfg.integrator;
    sc.t_end = cfg.t_end;
    sc.snapshot_every = cfg.snapshot_every;
    sc.eps0 = cfg.eps0;
    sc.validate();

    const Trajectory traj = simulate(sc, prof);

    const fs::path dir(cfg.out_dir);
    const fs::path traj_csv = dir / "trajectory.csv";
    const fs::path energy_csv = dir / "energy.csv";
    write_trajectory_csv(traj_csv, traj, prof);
    const SchemeCache cache = make_cache(prof);
    write_energy_csv(energy_csv, energy_series(traj, prof, cache));

    double phi_ratio_max = 0.0;
    for (const GridState& snap : traj.snapshots)
        phi_ratio_max =
            std::max(phi_ratio_max, forcing_monitor(snap, prof, cache).ratio);

    write_manifest(dir / "manifest.json", cfg,
                   {traj_csv.filename().string(), energy_csv.filename().string()},
                   file_hash(traj_csv), traj.status, traj.guard_time,
                   {{"phi_weight_ratio_max", phi_ratio_max},
                    {"dt_used", traj.dt_used},
                    {"steps", static_cast<double>(traj.steps)}});

    std::printf("evolve: %s after %ld steps (dt %s), %zu snapshots\n",
                traj.status.c_str(), traj.steps,
                format_double(traj.dt_used).c_str(), traj.snapshots.size());
    std::printf("evolve: forcing monitor max ratio %s\n",
                format_double(phi_ratio_max).c_str());
    if (traj.status == "guard_tripped") {
        std::printf("evolve: stretch guard tripped at t %s; last good snapshot written\n",
                    format_double(traj.guard_time).c_str());
        return kExitGuard;
    }
    return traj.status == "completed" ? kExitOk : kExitFailure;
}

int cmd_verify(const RunConfig& cfg, bool inject_broken_kernel) {
    cfg.params().validate(cfg.strict_regime);
    ensure_out_dir(cfg);
    const SteadyProfile prof = rescale_to_radius(
        solve_steady(cfg.params(), cfg.n_grid, cfg.tol, cfg.relax), 1.0);

    SweepOptions opt;
    opt.seed = cfg.seed;
    opt.mutate_kernel_sign = inject_broken_kernel;
    const std::vector<SweepReport> reports = run_verification_sweeps(prof, opt);

    const fs::path report = fs::path(cfg.out_dir) / "verify_report.json";
    atomic_write(report, sweep_reports_to_json(reports));

    const SweepReport* worst = nullptr;
    for (const SweepReport& r : reports) {
        std::printf("%-24s trials=%-6ld failures=%-4ld worst_margin=%s\n",
                    r.name.c_str(), r.trials, r.failures,
                    format_double(r.worst_margin).c_str());
        if (r.failures > 0 && (!worst || r.failures > worst->failures)) worst = &r;
    }
    std::printf("verify: wrote %s\n", report.string().c_str());
    if (!sweeps_all_pass(reports)) {
        std::printf("verify: FAILED, worst case '%s' (%ld/%ld trials, margin %s)\n",
                    worst->name.c_str(), worst->failures, worst->trials,
                    format_double(worst->worst_margin).c_str());
        return kExitVerify;
    }
    std::printf("verify: all sweeps passed\n");
    return kExitOk;
}

int cmd_fit_decay(const RunConfig& cfg, const std::string& series_path,
                  const std::string& norm_name, double t_lo, double t_hi) {
    ensure_out_dir(cfg);
    const auto series = read_series_csv(series_path, norm_name);
    const FitResult fit = decay_fit(series, t_lo, t_hi);

    FitRecord rec;
    rec.norm_name = norm_name;
    rec.t_lo = t_lo;
    rec.t_hi = t_hi;
    rec.slope = fit.slope;
    rec.r2 = fit.r2;
    rec.n_samples = fit.n_samples;
    rec.pass = !fit.degenerate && fit.slope <= -0.4;
    const fs::path out = fs::path(cfg.out_dir) / ("fit_" + norm_name + ".json");
    write_fit_json(out, rec);

    if (fit.degenerate) {
        std::printf("fit-decay: degenerate series for '%s' (%d in-window samples)\n",
                    norm_name.c_str(), fit.n_samples);
        return kExitDegenerateFit;
    }
    std::printf("fit-decay: %s slope %s (r2 %s, %d samples) -> %s\n",
                norm_name.c_str(), format_double(fit.slope).c_str(),
                format_double(fit.r2).c_str(), fit.n_samples,
                rec.pass ? "pass" : "no-pass");
    return kExitOk;
}

void add_param_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--s", cfg.s, "Riesz exponent s in (0, 1/2)");
    sub->add_option("--gamma", cfg.gamma, "adiabatic exponent gamma > 2(1-s)");
    sub->add_option("--n", cfg.n_grid, "half-grid interval count");
    sub->add_option("--tol", cfg.tol, "steady fixed-point tolerance");
    sub->add_option("--relax", cfg.relax, "steady Picard damping in (0, 1]");
    sub->add_option("--seed", cfg.seed, "sweep / test-function seed");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--strict-regime", cfg.strict_regime,
                  "require 3/8 < s < 1/2 and gamma < 1 + 2s/3");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "riesz_star: steady states, Lagrangian evolution, and verification "
        "sweeps for a 1D vacuum free-boundary viscous flow with attractive "
        "Riesz interaction"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string profile_csv, profile_json;
    bool inject_broken_kernel = false;
    std::string series_path, norm_name = "norm_v";
    double t_lo = 5.0, t_hi = 50.0;

    CLI::App* steady = app.add_subcommand("steady", "solve the equilibrium profile");
    add_param_flags(steady, cfg);

    CLI::App* evolve = app.add_subcommand("evolve", "run the Lagrangian scheme");
    add_param_flags(evolve, cfg);
    evolve->add_option("--eps0", cfg.eps0, "initial perturbation amplitude");
    evolve->add_option("--t-end", cfg.t_end, "final time");
    evolve->add_option("--dt", cfg.dt, "time step (0 = policy default h/4)");
    evolve->add_option("--integrator", cfg.integrator, "imex_be | explicit_rk4");
    evolve->add_option("--snapshot-every", cfg.snapshot_every,
                       "steps between snapshots (0 = auto)");
    evolve->add_option("--profile-csv", profile_csv,
                       "use a precomputed profile (CSV path)");
    evolve->add_option("--profile-json", profile_json,
                       "JSON header for --profile-csv");

    CLI::App* verify = app.add_subcommand("verify", "run the verification sweeps");
    add_param_flags(verify, cfg);
    verify->add_flag("--inject-broken-kernel", inject_broken_kernel,
                     "flip the kernel sign inside the sweeps (fault-injection hook; "
                     "must make verify fail)");

    CLI::App* fit = app.add_subcommand("fit-decay", "fit a decay slope to an energy series");
    fit->add_option("--series", series_path, "energy CSV path")->required();
    fit->add_option("--norm", norm_name, "column name to fit");
    fit->add_option("--t-lo", t_lo, "window start");
    fit->add_option("--t-hi", t_hi, "window end");
    fit->add_option("--out", cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (steady->parsed()) {
            cfg.command = "steady";
            return cmd_steady(cfg);
        }
        if (evolve->parsed()) {
            cfg.command = "evolve";
            return cmd_evolve(cfg, profile_csv, profile_json);
        }
        if (verify->parsed()) {
            cfg.command = "verify";
            return cmd_verify(cfg, inject_broken_kernel);
        }
        cfg.command = "fit-decay";
        return cmd_fit_decay(cfg, series_path, norm_name, t_lo, t_hi);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const GuardError& e) {
        std::fprintf(stderr, "guard trip at t=%g (k=%d, stretch=%g): %s\n", e.t,
                     e.k, e.stretch, e.what());
        return kExitGuard;
    } catch (const SteadyError& e) {
        std::fprintf(stderr, "steady solve failed: %s\n", e.what());
        const std::size_t hist = e.residual_history.size();
        for (std::size_t i = hist > 5 ? hist - 5 : 0; i < hist; ++i)
            std::fprintf(stderr, "  residual[%zu] = %g\n", i, e.residual_history[i]);
        return kExitFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}
