#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmlab/report.hpp"

namespace rmlab {

// Instance rejected before any computation (exit code 2).
struct InvalidInstance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    i64 D = 12;
    long p = 5;
    std::optional<QuadForm> form;  // defaults to the reduced representative of the identity class
    int N = 25;                    // p-adic precision (digits)
    i64 nmax = 30;
    int m_max = 2;                 // ordinary projection depth on the diagonal route
    i64 diag_nmax = 10;            // diagonal route compared for n <= min(nmax, diag_nmax)
    int depth = 4;                 // p-conductor depth of the winding sums
    bool accelerate = true;        // extrapolate the depth layers 0..depth to the limit (Wynn epsilon)
    int level = 3;                 // Siegel-measure level M
    std::optional<int> fit_threshold;  // defaults to N - 5
    int deg_bound = 4;
    int budget = 30;               // algdep precision budget (digits)
    std::optional<double> min_margin;  // defaults to p^5
    int cases = 1000;              // per randomized property suite
    std::vector<std::string> suites;
    std::string cache_dir;
    int threads = 1;
    std::uint64_t seed = 1;

    QuadForm tau() const { return *form; }
    int threshold() const { return fit_threshold.value_or(N - 5); }
    double margin() const;
    // Numeric parameters only: the cache key and the config echo of reports.
    json to_json() const;
};

// Checks the instance hypotheses and fills defaults; throws InvalidInstance naming the violated invariant.
void validate(RunConfig& cfg);
// Parses "A,B,C" (also "a,b,c,d" for matrices); throws InvalidInstance.
std::vector<i64> parse_int_list(const std::string& s, size_t count, const std::string& what);

// JSON-lines cache of report payloads keyed by (command, numeric config, code version).
// Entries written by another code version are never read.
class ReportCache {
public:
    explicit ReportCache(std::string dir) : dir_(std::move(dir)) {}
    bool enabled() const { return !dir_.empty(); }
    std::optional<Report> get(const std::string& command, const json& key) const;
    void put(const Report& r, const json& key) const;
    std::string path() const;

private:
    std::string dir_;
};

// Full generating-series pipeline: winding route, diagonal route with ordinary projection, fit, constant term.
Report run_gtau(const RunConfig& cfg);
// gtau through the cache (a hit returns the stored payload with timings {"cache": "hit"}).
Report run_gtau_cached(const RunConfig& cfg);
// Winding series only.
Report run_winding(const RunConfig& cfg);
// Winding series + fit to M_2(Gamma_0(p)) + log J_DR.
Report run_fit(const RunConfig& cfg);
// Property suites: padic, bijections, vanishing, measure (an empty list gives an empty report).
Report run_verify(const RunConfig& cfg);
// gtau -> unit candidates -> recognition -> L-invariants -> L-cancellation replay.
Report run_recognize(const RunConfig& cfg);
// phi_DR and the measure identities for one gamma in Gamma_0(p).
Report run_phi_dr(const RunConfig& cfg, const Mat2& gamma);
// Poisson transform of mu_DR(gamma_tau) at level M.
Report run_jdr(const RunConfig& cfg);
// algdep on a value given as "num/den" or "a,b" (= a + b w).
Report run_algdep(const RunConfig& cfg, const std::string& value);

// Exit code of a finished report: 0 pass, 3 criterion failure.
int exit_code(const Report& r);

}  // namespace rmlab
