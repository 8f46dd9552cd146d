#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rmlab/pipeline.hpp"

using namespace rmlab;

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitInvalid = 2;

int emit(const Report& r, const std::string& out_path) {
    const std::string text = r.to_json().dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text << '\n';
    }
    std::cout << text << '\n';
    return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmlab: p-adic generating series of real multiplication values, their modularity, and the "
                 "Gross-Stark units they encode"};
    app.set_config("--config", "", "TOML file with option defaults (command-line flags win)");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string form, out_path, gamma, value;
    int fit_threshold = -1;
    double min_margin = -1;

    app.add_option("--disc", cfg.D, "fundamental discriminant D > 1")->capture_default_str();
    app.add_option("--p", cfg.p, "prime p >= 5, inert in Q(sqrt D)")->capture_default_str();
    app.add_option("--form", form, "primitive form A,B,C of discriminant D (default: identity class)");
    app.add_option("--prec", cfg.N, "p-adic precision in digits")->capture_default_str();
    app.add_option("--nmax", cfg.nmax, "number of q-expansion coefficients")->capture_default_str();
    app.add_option("--depth", cfg.depth, "p-conductor depth of the winding sums")->capture_default_str();
    app.add_flag("--accelerate,!--no-accelerate", cfg.accelerate,
                 "extrapolate the winding depth layers to the limit (Wynn epsilon)")
        ->capture_default_str();
    app.add_option("--mmax", cfg.m_max, "ordinary projection depth (diagonal route)")->capture_default_str();
    app.add_option("--diag-nmax", cfg.diag_nmax, "diagonal route compared for n up to this bound")
        ->capture_default_str();
    app.add_option("--level", cfg.level, "Siegel-measure level M")->capture_default_str();
    app.add_option("--fit-threshold", fit_threshold, "residual valuation required of the fit (default N - 5)");
    app.add_option("--deg-bound", cfg.deg_bound, "algdep degree bound")->capture_default_str();
    app.add_option("--budget", cfg.budget, "algdep precision budget in digits")->capture_default_str();
    app.add_option("--min-margin", min_margin, "algdep confidence margin (default p^5)");
    app.add_option("--cases", cfg.cases, "cases per randomized property suite")->capture_default_str();
    app.add_option("--out", out_path, "also write the JSON report to this file");
    app.add_option("--cache-dir", cfg.cache_dir, "directory of the JSON-lines report cache");
    app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed of the randomized property suites")->capture_default_str();

    auto* gtau = app.add_subcommand("gtau", "winding route, diagonal route, fit and constant term");
    auto* verify = app.add_subcommand("verify", "invariant suites");
    verify->add_option("--suite", cfg.suites, "padic, bijections, vanishing, measure (repeatable)");
    auto* recog = app.add_subcommand("recognize-unit", "recognize the Gross-Stark unit from the constant term");
    auto* winding = app.add_subcommand("winding", "winding-route coefficients only");
    auto* phidr = app.add_subcommand("phi-dr", "Dedekind-Rademacher homomorphism and measure masses");
    phidr->add_option("--gamma", gamma, "matrix a,b,c,d in Gamma_0(p)")->required();
    auto* jdr = app.add_subcommand("jdr", "Poisson transform of the Dedekind-Rademacher measure");
    auto* fit = app.add_subcommand("fit", "winding series fitted to weight-2 forms on Gamma_0(p)");
    auto* algdep = app.add_subcommand("algdep", "integer polynomial vanishing at a p-adic value");
    algdep->add_option("--value", value, "num/den or a,b (= a + b w)")->required();
    algdep->add_option("--deg", cfg.deg_bound, "degree bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (!form.empty()) {
            auto f = parse_int_list(form, 3, "form");
            cfg.form = QuadForm{f[0], f[1], f[2]};
        }
        if (fit_threshold >= 0) cfg.fit_threshold = fit_threshold;
        if (min_margin > 0) cfg.min_margin = min_margin;

        Report r;
        if (*gtau) {
            r = run_gtau_cached(cfg);
        } else if (*verify) {
            r = run_verify(cfg);
        } else if (*recog) {
            r = run_recognize(cfg);
        } else if (*winding) {
            r = run_winding(cfg);
        } else if (*phidr) {
            auto g = parse_int_list(gamma, 4, "gamma");
            r = run_phi_dr(cfg, Mat2{g[0], g[1], g[2], g[3]});
        } else if (*jdr) {
            r = run_jdr(cfg);
        } else if (*fit) {
            r = run_fit(cfg);
        } else if (*algdep) {
            r = run_algdep(cfg, value);
        }
        return emit(r, out_path);
    } catch (const InvalidInstance& e) {
        std::cerr << "invalid instance: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << '\n';
        return kExitComputation;
    }
}
