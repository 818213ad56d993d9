#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "minorant/calibration.hpp"
#include "minorant/cascade.hpp"
#include "minorant/config.hpp"
#include "minorant/domination.hpp"
#include "minorant/errors.hpp"
#include "minorant/noncutoff.hpp"
#include "minorant/solver.hpp"

namespace {

using namespace minorant;

std::string join_path(const std::string& dir, const std::string& name) {
    if (std::filesystem::path(name).is_absolute()) return name;
    return (std::filesystem::path(dir) / name).string();
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_cutoff_trace(const std::string& path, const CascadeTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace " + path);
    out << "n,log_a,delta\n";
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        out << n << "," << fmt(trace.log_a[n]) << "," << fmt(trace.delta[n])
            << "\n";
    }
}

void write_noncutoff_trace(const std::string& path,
                           const NoncutoffTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace " + path);
    out << "n,log_a,delta,log_eps,log_Delta,damping\n";
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        out << n << "," << fmt(trace.log_a[n]) << "," << fmt(trace.delta[n]);
        if (n == 0) {
            out << ",,,";
        } else {
            out << "," << fmt(trace.log_eps[n - 1]) << ","
                << fmt(trace.log_Delta[n - 1]) << ","
                << fmt(trace.damping[n - 1]);
        }
        out << "\n";
    }
}

int cmd_certify(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
    const AprioriBounds bounds = cfg.resolved_bounds();
    const UniversalConstants csts = cfg.resolved_constants();

    const std::string cert_path = join_path(out_dir, cfg.out_certificate);
    const std::string trace_path = join_path(out_dir, cfg.out_trace);

    if (cfg.regime == Regime::Cutoff) {
        CascadeConfig cc = cfg.cascade;
        cc.csts = csts;
        const CutoffCertification run =
            certify_cutoff_full(cfg.kernel, bounds, cfg.tau, cc);
        run.certificate.save(cert_path);
        write_cutoff_trace(trace_path, run.trace);
        if (!quiet) {
            std::cout << "certificate: " << cert_path
                      << " (maxwellian, log rho' = "
                      << fmt(run.certificate.log_rho_prime)
                      << ", theta' = " << fmt(run.certificate.theta_prime)
                      << ")\n";
        }
    } else {
        const NoncutoffCertification run = certify_noncutoff_full(
            cfg.kernel, bounds, cfg.tau, cfg.schedule, csts);
        run.certificate.save(cert_path);
        write_noncutoff_trace(trace_path, run.trace);
        if (!quiet) {
            std::cout << "certificate: " << cert_path
                      << " (stretched_exp, log C1 = "
                      << fmt(run.certificate.log_C1)
                      << ", C2 = " << fmt(run.certificate.C2)
                      << ", K = " << fmt(run.certificate.K) << ")\n";
        }
    }
    return 0;
}

int cmd_calibrate(const RunConfig& cfg, const std::string& out_dir,
                  bool quiet) {
    if (cfg.calibration_plan && cfg.calibration_plan->empty()) {
        throw ConfigError("calibration plan is empty");
    }
    const CalibrationRecord rec = run_full_calibration(
        cfg.kernel, cfg.cascade.delta0_rule, cfg.calibration_samples, cfg.seed,
        cfg.cascade.xi_mode,
        cfg.calibration_plan ? &*cfg.calibration_plan : nullptr);
    const std::string path = join_path(out_dir, cfg.out_calibration);
    rec.save(path);
    if (!quiet) {
        std::cout << "calibration: " << path
                  << " (cst_spread = " << fmt(rec.csts.cst_spread)
                  << ", cst_CL = " << fmt(rec.csts.cst_CL)
                  << ", cst_up = " << fmt(rec.csts.cst_up) << ")\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& out_dir,
               double inflate, bool quiet) {
    if (!cfg.verify) throw ConfigError("config has no verify section");
    const VerifySpec& spec = *cfg.verify;
    Certificate cert = Certificate::load(spec.certificate_path);
    if (inflate != 1.0) {
        if (!(inflate > 0.0)) throw ConfigError("inflate must be positive");
        if (cert.kind == Certificate::Kind::Maxwellian) {
            cert.log_rho_prime += std::log(inflate);
        } else {
            cert.log_C1 += std::log(inflate);
        }
    }

    DominationReport report;
    if (spec.solution.type == SolutionSpec::Type::Bkw) {
        const BKWState state = spec.solution.bkw.resolved(cfg.kernel);
        auto solution = [&state](double t, const Vec& v) {
            return bkw_evaluate(state, t, v);
        };
        report = check_domination(cert, solution, spec.times, spec.grid,
                                  spec.tolerance);
    } else {
        const BKWState state = spec.solution.bkw.resolved(cfg.kernel);
        const GridDistribution f0 =
            bkw_grid(state, 0.0, spec.solution.grid.points_per_axis,
                     spec.solution.grid.v_max);
        SolverOptions opts;
        opts.dt = spec.solution.dt;
        opts.samples_per_node = spec.solution.samples_per_node;
        opts.seed = cfg.seed;
        const SolverResult sol =
            solve_homogeneous(cfg.kernel, f0, spec.solution.t_end, opts);
        auto solution = [&sol](double t, const Vec& v) {
            std::size_t best = 0;
            double best_err = std::abs(sol.times[0] - t);
            for (std::size_t i = 1; i < sol.times.size(); ++i) {
                const double err = std::abs(sol.times[i] - t);
                if (err < best_err) {
                    best = i;
                    best_err = err;
                }
            }
            if (best_err > 0.5 * sol.dt + 1e-12) {
                throw ConfigError("no solver snapshot near t = " +
                                  std::to_string(t));
            }
            return sol.snapshots[best].at(v);
        };
        report = check_domination(cert, solution, spec.times, spec.grid,
                                  spec.tolerance);
    }

    const std::string path = join_path(out_dir, spec.report_path);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report " + path);
    out << report.to_json().dump(2) << "\n";
    if (!quiet) {
        std::cout << (report.pass ? "PASS" : "FAIL")
                  << " min margin = " << fmt(report.min_margin) << " at t = "
                  << fmt(report.argmin_t) << "\n";
    }
    return report.pass ? 0 : 3;
}

int cmd_inspect(const std::string& path) {
    const Certificate cert = Certificate::load(path);
    std::cout << "kind: "
              << (cert.kind == Certificate::Kind::Maxwellian ? "maxwellian"
                                                             : "stretched_exp")
              << "\n";
    std::cout << "dimension: " << cert.dimension << "\n";
    std::cout << "tau: " << fmt(cert.tau) << "\n";
    std::cout << "R0: " << fmt(cert.R0) << "\n";
    if (cert.kind == Certificate::Kind::Maxwellian) {
        std::cout << "log rho': " << fmt(cert.log_rho_prime) << "\n";
        std::cout << "theta': " << fmt(cert.theta_prime) << "\n";
    } else {
        std::cout << "log C1: " << fmt(cert.log_C1) << "\n";
        std::cout << "C2: " << fmt(cert.C2) << "\n";
        std::cout << "K: " << fmt(cert.K) << "\n";
    }
    std::cout << "provenance:\n" << cert.provenance.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minorant: lower-bound certificates for Boltzmann solutions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    bool quiet = false;
    double inflate = 1.0;
    std::string inspect_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file")
            ->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](std::uint64_t s) {
                seed_override = s;
                has_seed_override = true;
            },
            "override the config seed");
        cmd->add_flag("--quiet", quiet, "suppress progress output");
    };

    CLI::App* certify = app.add_subcommand("certify", "compute a certificate");
    add_common(certify);
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "calibrate universal constants");
    add_common(calibrate);
    CLI::App* verify =
        app.add_subcommand("verify", "check a certificate against a solution");
    add_common(verify);
    verify->add_option("--inflate", inflate,
                       "multiply the certificate height (falsifiability runs)");
    CLI::App* inspect =
        app.add_subcommand("inspect", "pretty-print a certificate");
    inspect->add_option("certificate", inspect_path, "certificate file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) return cmd_inspect(inspect_path);

        RunConfig cfg = load_run_config(config_path);
        if (has_seed_override) cfg.seed = seed_override;
        std::filesystem::create_directories(out_dir);

        if (certify->parsed()) return cmd_certify(cfg, out_dir, quiet);
        if (calibrate->parsed()) return cmd_calibrate(cfg, out_dir, quiet);
        if (verify->parsed()) return cmd_verify(cfg, out_dir, inflate, quiet);
    } catch (const minorant::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.infeasible() ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
