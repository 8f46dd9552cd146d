#include "rmlab/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmlab/eisenstein.hpp"
#include "rmlab/gsunits.hpp"
#include "rmlab/modforms.hpp"
#include "rmlab/siegel.hpp"
#include "rmlab/suites.hpp"
#include "rmlab/winding.hpp"

namespace rmlab {

namespace {

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double lap() {
        auto t = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t - t0_).count();
        t0_ = t;
        return s;
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

bool agree(const PadicScalar& x, const PadicScalar& y) {
    return x.val_diff(y) >= std::min(x.abs_prec(), y.abs_prec());
}

// Everything a pipeline needs about the instance, built once.
struct Instance {
    PadicCtx ctx;
    NarrowClassGroup G;
    QuadEmbedding emb;
    QuadForm tau;
    int tau_cls;
    std::vector<Character> odd;

    explicit Instance(const RunConfig& cfg)
        : ctx(PadicContext::make(cfg.p, cfg.N)),
          G(cfg.D),
          emb(ctx, cfg.D),
          tau(cfg.tau()),
          tau_cls(G.class_of_form(tau)),
          odd(G.odd_characters()) {}
};

json series_to_json(const std::vector<PadicScalar>& a) {
    json out = json::array();
    for (size_t n = 1; n < a.size(); ++n) out.push_back(padic_to_json(a[n]));
    return out;
}

Report make_report(const std::string& command, const RunConfig& cfg) {
    Report r;
    r.command = command;
    r.config = cfg.to_json();
    return r;
}

// Winding series a_1..a_nmax at the configured depth, plus the triviality certificate.
struct WindingStage {
    std::vector<PadicScalar> a;    // accelerated when configured, else the depth-K truncation
    std::vector<PadicScalar> raw;  // depth-K truncation
    bool trivial = false;     // a unit of norm -1 exists
    bool all_zero = false;
    int min_valuation = 0;    // over n of the valuation (precision bound for zeros)
};

WindingStage winding_stage(const RunConfig& cfg, Instance& I, ClassLogSums& S, Report& r) {
    WindingStage w;
    if (cfg.accelerate) {
        auto acc = winding_series_accelerated(S, I.tau, cfg.nmax, cfg.depth);
        w.a = std::move(acc.accelerated);
        w.raw = std::move(acc.raw);
    } else {
        w.a = winding_series(S, I.tau, cfg.nmax, cfg.depth);
        w.raw = w.a;
    }
    w.trivial = has_norm_minus_one(cfg.D);
    w.all_zero = true;
    w.min_valuation = PadicScalar::kExact;
    for (i64 n = 1; n <= cfg.nmax; ++n) {
        const auto& x = w.a[static_cast<size_t>(n)];
        w.all_zero = w.all_zero && (x.is_zero() || x.valuation() >= cfg.N);
        w.min_valuation = std::min(w.min_valuation, x.valuation());
    }
    r.results["winding"] = json{{"form", form_to_json(I.tau)},
                                {"class", I.tau_cls},
                                {"depth", cfg.depth},
                                {"accelerated", cfg.accelerate},
                                {"coefficients", series_to_json(w.a)}};
    r.results["has_norm_minus_one"] = w.trivial;
    r.certificates["winding_all_zero"] = json{{"all_zero", w.all_zero}, {"precision", cfg.N}};
    return w;
}

// Fit of the winding series to the modular basis, when the level is supported.
struct FitStage {
    bool done = false;
    bool ok = false;
    PadicScalar a0;
};

FitStage fit_stage(const RunConfig& cfg, Instance& I, const WindingStage& w, Report& r) {
    FitStage f;
    const int thr = cfg.threshold();
    if (w.trivial) {
        f.done = true;
        f.ok = w.all_zero;
        f.a0 = PadicScalar::zero(I.ctx, cfg.N);
        r.results["fit"] = json{{"skipped", "series vanishes identically (norm -1 unit)"}};
        r.results["log_u_tau"] = padic_to_json(f.a0);
        return f;
    }
    int dim = 0;
    try {
        dim = modular_dimension(cfg.p);
    } catch (const std::exception&) {
        r.results["fit"] = json{{"skipped", "no modular basis built in for this level"}};
        r.notes.push_back("fit skipped: weight-2 basis only for levels 5, 7, 11, 13");
        return f;
    }
    QSeries q;
    q.level = cfg.p;
    q.coeffs = w.a;
    q.coeffs[0] = PadicScalar::zero(I.ctx, cfg.N);
    q.constant_known = false;
    const auto basis = modular_basis(I.ctx, cfg.p, cfg.nmax);
    auto fit = fit_to_basis(q, basis, thr);
    auto L = extract_logJDR(fit, cfg.p, thr);
    q.coeffs = w.raw;
    q.coeffs[0] = PadicScalar::zero(I.ctx, cfg.N);
    const int raw_min = fit_to_basis(q, basis, thr).min_residual_valuation;
    json coeffs = json::array();
    for (const auto& c : fit.coeffs) coeffs.push_back(padic_to_json(c));
    r.results["fit"] = json{{"basis_dimension", dim},
                            {"coefficients", coeffs},
                            {"solve_rows", fit.solve_rows},
                            {"check_rows", fit.check_rows.size()},
                            {"residual_valuations", fit.residual_valuations},
                            {"worst_row", fit.worst_row ? json(*fit.worst_row) : json(nullptr)}};
    r.results["log_u_tau"] = padic_to_json(L.a0);
    r.results["log_JDR"] = padic_to_json(L.value);
    r.certificates["fit"] = json{{"min_residual_valuation", fit.min_residual_valuation},
                                 {"threshold", thr},
                                 {"certified", fit.certified},
                                 {"a0_consistent", L.a0_consistent},
                                 {"accelerated", cfg.accelerate},
                                 {"truncated_series_min_residual_valuation", raw_min}};
    f.done = true;
    f.ok = fit.certified && L.a0_consistent;
    f.a0 = L.a0;
    return f;
}

// Diagonal restriction (ordinary projection) against the psi-weighted winding sums at depth 2 m_max.
bool diagonal_stage(const RunConfig& cfg, Instance& I, ClassLogSums& S, Report& r) {
    if (I.odd.empty()) {
        r.results["diagonal"] = json{{"skipped", "no odd character"}};
        return true;
    }
    const int thr = cfg.threshold();
    const auto& psi = I.odd.front();
    json rows = json::array();
    int worst = PadicScalar::kExact;
    for (i64 n = 1; n <= std::min(cfg.nmax, cfg.diag_nmax); ++n) {
        if (n % cfg.p == 0) continue;
        auto op = ordinary_projection([&](i64 k) { return diag_coefficient(I.G, psi, k, I.emb); }, n, cfg.p,
                                      cfg.m_max, 0);
        PadicScalar w = PadicScalar::zero(I.ctx, cfg.N);
        for (int c = 0; c < I.G.order(); ++c)
            w += log_Tn_Jw_depth(S, I.G.representative(c), n, 2 * cfg.m_max).scaled(psi[static_cast<size_t>(c)]);
        int v = op.value.scaled(2).val_diff(-w);
        worst = std::min(worst, v);
        rows.push_back(json{{"n", n},
                            {"diagonal", padic_to_json(op.value)},
                            {"winding_psi_sum", padic_to_json(w)},
                            {"match_valuation", v},
                            {"projection_profile", op.profile}});
    }
    r.results["diagonal"] = json{{"psi", psi}, {"m_max", cfg.m_max}, {"winding_depth", 2 * cfg.m_max}, {"rows", rows}};
    r.certificates["diagonal_match"] = json{{"min_valuation", worst}, {"threshold", thr}};
    return worst >= thr;
}

RunConfig validated(const RunConfig& cfg) {
    RunConfig c = cfg;
    validate(c);
    return c;
}

}  // namespace

// ---------------------------------------------------------------- config

double RunConfig::margin() const { return min_margin.value_or(std::pow(static_cast<double>(p), 5)); }

json RunConfig::to_json() const {
    json j;
    j["D"] = D;
    j["p"] = p;
    j["form"] = form ? form_to_json(*form) : json(nullptr);
    j["N"] = N;
    j["nmax"] = nmax;
    j["m_max"] = m_max;
    j["diag_nmax"] = diag_nmax;
    j["depth"] = depth;
    j["accelerate"] = accelerate;
    j["level"] = level;
    j["fit_threshold"] = threshold();
    j["deg_bound"] = deg_bound;
    j["budget"] = budget;
    j["min_margin"] = margin();
    j["cases"] = cases;
    j["suites"] = suites;
    j["seed"] = seed;
    return j;
}

std::vector<i64> parse_int_list(const std::string& s, size_t count, const std::string& what) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInstance(what + ": '" + item + "' is not an integer");
        }
    }
    if (out.size() != count)
        throw InvalidInstance(what + ": expected " + std::to_string(count) + " comma-separated integers");
    return out;
}

void validate(RunConfig& cfg) {
    if (cfg.D <= 1 || !is_fundamental_discriminant(cfg.D))
        throw InvalidInstance("D = " + std::to_string(cfg.D) + " is not a positive fundamental discriminant");
    if (cfg.p < 5 || !is_prime(cfg.p)) throw InvalidInstance("p = " + std::to_string(cfg.p) + " must be a prime >= 5");
    if (cfg.D % cfg.p == 0) throw InvalidInstance("p divides D");
    if (kronecker(cfg.D, cfg.p) != -1) throw InvalidInstance("p is not inert in Q(sqrt D): (D|p) != -1");
    if (cfg.N < 5 || cfg.N > 2000) throw InvalidInstance("precision N must lie in [5, 2000]");
    if (cfg.nmax < 1) throw InvalidInstance("nmax must be >= 1");
    if (cfg.depth < 0 || cfg.m_max < 0) throw InvalidInstance("depth and m_max must be >= 0");
    if (cfg.level < 1 || cfg.level > SiegelMeasure::kMaxLevel)
        throw InvalidInstance("level M must lie in [1, " + std::to_string(SiegelMeasure::kMaxLevel) + "]");
    if (cfg.deg_bound < 1 || cfg.budget < 1) throw InvalidInstance("deg-bound and budget must be >= 1");
    if (cfg.threads < 1) cfg.threads = 1;
    if (cfg.form) {
        const auto& f = *cfg.form;
        if (!f.primitive()) throw InvalidInstance("form " + f.str() + " is not primitive");
        if (f.disc() != cfg.D)
            throw InvalidInstance("form " + f.str() + " has discriminant " + std::to_string(f.disc()) + " != D");
        if (f.A == 0 || f.C == 0) throw InvalidInstance("form " + f.str() + " represents zero");
    } else {
        cfg.form = NarrowClassGroup(cfg.D).representative(0);
    }
}

// ---------------------------------------------------------------- cache

std::string ReportCache::path() const { return (std::filesystem::path(dir_) / "reports.jsonl").string(); }

std::optional<Report> ReportCache::get(const std::string& command, const json& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path());
    if (!in) return std::nullopt;
    std::optional<Report> hit;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json e = json::parse(line, nullptr, false);
        if (e.is_discarded()) continue;  // torn write: ignore
        if (e.value("version", "") != kCodeVersion || e.value("command", "") != command) continue;
        if (e.at("key") != key) continue;
        hit = Report::from_payload(e.at("payload"));
    }
    return hit;
}

void ReportCache::put(const Report& r, const json& key) const {
    if (!enabled()) return;
    std::filesystem::create_directories(dir_);
    std::ofstream out(path(), std::ios::app);
    json e;
    e["version"] = kCodeVersion;
    e["command"] = r.command;
    e["key"] = key;
    e["payload"] = r.payload();
    out << e.dump() << '\n';
}

// ---------------------------------------------------------------- commands

Report run_gtau(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("gtau", cfg);
    Stopwatch sw;
    Instance I(cfg);
    ClassLogSums S(I.G, I.emb, cfg.threads);
    auto w = winding_stage(cfg, I, S, r);
    r.timings["winding_s"] = sw.lap();
    bool diag_ok = diagonal_stage(cfg, I, S, r);
    r.timings["diagonal_s"] = sw.lap();
    auto f = fit_stage(cfg, I, w, r);
    r.timings["fit_s"] = sw.lap();
    r.pass = diag_ok && f.done && f.ok;
    if (w.trivial) r.notes.push_back("norm -1 unit: the generating series vanishes; certified all-zero to precision");
    return r;
}

Report run_gtau_cached(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    ReportCache cache(cfg.cache_dir);
    json key = cfg.to_json();
    if (auto hit = cache.get("gtau", key)) {
        hit->timings = json{{"cache", "hit"}};
        return *hit;
    }
    Report r = run_gtau(cfg);
    cache.put(r, key);
    return r;
}

Report run_winding(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("winding", cfg);
    Stopwatch sw;
    Instance I(cfg);
    ClassLogSums S(I.G, I.emb, cfg.threads);
    auto w = winding_stage(cfg, I, S, r);
    json counts = json::array();
    for (i64 n = 1; n <= cfg.nmax; ++n) counts.push_back(S.counts(n));
    r.results["pair_counts_by_class"] = counts;
    r.certificates["min_valuation"] = w.min_valuation;
    r.timings["winding_s"] = sw.lap();
    r.pass = !w.trivial || w.all_zero;
    return r;
}

Report run_fit(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("fit", cfg);
    Stopwatch sw;
    Instance I(cfg);
    ClassLogSums S(I.G, I.emb, cfg.threads);
    auto w = winding_stage(cfg, I, S, r);
    r.timings["winding_s"] = sw.lap();
    auto f = fit_stage(cfg, I, w, r);
    r.timings["fit_s"] = sw.lap();
    r.pass = f.done && f.ok;
    return r;
}

Report run_verify(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("verify", cfg);
    Stopwatch sw;
    if (cfg.suites.empty()) {
        r.notes.push_back("empty suite list");
        return r;
    }
    Instance I(cfg);
    for (const auto& s : cfg.suites) {
        SuiteResult res;
        if (s == "padic") {
            res = suite_padic(cfg.p, cfg.N, cfg.cases, cfg.seed);
        } else if (s == "bijections") {
            res = suite_bijections(I.G, I.tau, std::min<i64>(cfg.nmax, 10), I.emb);
        } else if (s == "vanishing") {
            res = suite_vanishing(I.G, cfg.nmax, cfg.p);
        } else if (s == "measure") {
            res = suite_measure(cfg.p, 20, 10000, cfg.seed, std::min(cfg.level, 2));
        } else {
            throw InvalidInstance("unknown suite '" + s + "' (padic, bijections, vanishing, measure)");
        }
        r.results[s] = res.table;
        r.certificates[s] = json{{"pass", res.pass}};
        r.timings[s + "_s"] = sw.lap();
        r.pass = r.pass && res.pass;
    }
    return r;
}

Report run_recognize(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("recognize-unit", cfg);
    Stopwatch sw;
    Report g = run_gtau_cached(cfg);
    r.timings["gtau"] = g.timings;
    r.results["gtau_status"] = g.pass ? "pass" : "fail";
    Instance I(cfg);
    if (has_norm_minus_one(cfg.D)) {
        r.results["degenerate"] = true;
        r.notes.push_back("degenerate: a_0 = 0 (unit of norm -1); the unit is torsion times a power of p");
        r.pass = false;
        return r;
    }
    if (!g.results.contains("log_u_tau")) throw std::runtime_error("gtau produced no constant term (fit skipped)");
    PadicScalar a0 = padic_from_json(g.results.at("log_u_tau"), I.ctx);
    // only the digits certified by the overdetermined fit are meaningful
    const int certified = g.certificates.at("fit").at("min_residual_valuation").get<int>();
    if (certified < a0.abs_prec()) a0 = a0.with_abs_prec(certified);
    r.results["a0_digits"] = a0.abs_prec();
    auto cands = unit_from_constant_term(a0, I.G, I.tau_cls);
    int avail = cands.front().value.abs_prec();
    int budget = std::min(cfg.budget, avail);
    if (budget < cfg.budget)
        r.notes.push_back("algdep budget lowered from " + std::to_string(cfg.budget) + " to the " +
                          std::to_string(avail) + " digits carried by the constant term");
    auto rec = recognize(cands, I.G, I.tau_cls, cfg.deg_bound, budget, cfg.margin());
    r.timings["recognize_s"] = sw.lap();

    json newton = json::array(), predicted = json::array();
    for (const auto& q : rec.newton) newton.push_back(mpq_to_json(q));
    for (const auto& q : rec.predicted) predicted.push_back(mpq_to_json(q));
    r.results["polynomial"] = rec.success ? poly_to_json(rec.algdep.poly) : json(nullptr);
    r.results["polynomial_str"] = rec.success ? poly_str(rec.algdep.poly) : "";
    r.results["twist"] = rec.twist;
    r.results["margin"] = rec.algdep.margin;
    r.results["newton_ok"] = rec.newton_ok;
    r.results["field_check_ok"] = rec.field_checked ? json(rec.field_ok) : json(nullptr);
    r.results["newton_slopes"] = newton;
    r.results["predicted_slopes"] = predicted;
    r.results["reciprocal"] = rec.reciprocal_ok;
    r.results["field_split"] = json{{"split", rec.field_split}, {"primes", rec.field_primes}};
    r.results["twists_tried"] = rec.twists_tried;
    r.results["twists_passing"] = rec.twists_passing;
    r.results["unit_candidate"] = rec.success ? padic_to_json(rec.unit.value) : json(nullptr);
    r.certificates["recognition"] = json{{"budget", budget},
                                         {"min_margin", cfg.margin()},
                                         {"margin", rec.algdep.margin},
                                         {"vanishing", rec.algdep.vanishing}};
    if (!rec.note.empty()) r.notes.push_back(rec.note);
    r.pass = rec.success && rec.newton_ok && (!rec.field_checked || rec.field_ok);

    if (rec.success && I.G.order() == 2 && !I.odd.empty()) {
        const auto& psi = I.odd.front();
        auto li = l_invariants_from_unit(rec, I.G, psi, I.tau_cls);
        r.results["l_invariants"] = json{{"L1", padic_to_json(li.L1)},
                                         {"L2", padic_to_json(li.L2)},
                                         {"L", padic_to_json(li.L)},
                                         {"ord1", mpq_to_json(li.ord1)},
                                         {"ord2", mpq_to_json(li.ord2)},
                                         {"L_psi_0", mpq_to_json(li.L_psi_0)},
                                         {"gross_stark_ok", li.gross_stark_ok}};
        r.certificates["gross_stark"] = json{{"precision", li.gross_stark_precision}, {"ok", li.gross_stark_ok}};
        // Replay of the cancellation identity with the recovered L-invariants on the first 20 p-primitive nu.
        PadicScalar ratio = li.L2 / li.L;
        int checked = 0, agreeing = 0;
        for (i64 n = 1; checked < 20; ++n) {
            for (const auto& e : enumerate_trace(n, cfg.D, cfg.p)) {
                if (e.vp != 0 || checked >= 20) continue;
                auto F = antiparallel_coeff(I.G, psi, e.x, e.n, li.L1, li.L2, I.emb);
                auto E = eis_family_coeff(I.G, psi, EisFamily::OnePsi, e.x, e.n, I.emb) -
                         eis_family_coeff(I.G, psi, EisFamily::PsiOne, e.x, e.n, I.emb);
                auto lhs = F + E * ratio;
                auto rhs = dual_coeff_Fplus(I.G, psi, e.x, e.n, I.emb);
                ++checked;
                if (agree(lhs.a, rhs.a) && agree(lhs.b, rhs.b)) ++agreeing;
            }
        }
        r.results["l_cancellation"] = json{{"checked", checked}, {"agreeing", agreeing}};
        r.pass = r.pass && li.gross_stark_ok && agreeing == checked;
        r.timings["l_invariants_s"] = sw.lap();
    } else if (rec.success) {
        r.notes.push_back("L-invariants need h+ = 2 and an odd character; skipped");
    }
    return r;
}

Report run_phi_dr(const RunConfig& cfg0, const Mat2& g) {
    RunConfig cfg = validated(cfg0);
    if (g.det() != 1) throw InvalidInstance("gamma has determinant " + std::to_string(g.det()) + " != 1");
    if (g.c % cfg.p != 0) throw InvalidInstance("gamma is not in Gamma_0(p): p does not divide c");
    Report r = make_report("phi-dr", cfg);
    r.config["gamma"] = {g.a, g.b, g.c, g.d};
    Stopwatch sw;
    Mat2 gp{g.a, g.b * cfg.p, g.c / cfg.p, g.d};
    i64 phi = phi_DR(g, cfg.p);
    r.results["phi_DR"] = phi;
    r.results["rademacher_phi"] = rademacher_phi(g);
    r.results["rademacher_phi_gp"] = rademacher_phi(gp);
    json word = json::array();
    for (const auto& l : sl2z_word(g))
        word.push_back(l.kind == WordLetter::S ? json("S") : l.kind == WordLetter::NegI ? json("-I") : json(l.k));
    r.results["word"] = word;
    SiegelMeasure sm(cfg.p, cfg.level);
    auto mu = sm.measure(g);
    r.results["total_mass"] = mu.total();
    r.results["mass_pZp_x_Zpx"] = mu.mass_p_times_unit();
    r.certificates["measure"] = json{{"level", cfg.level}, {"max_rounding_error", sm.max_rounding_error()}};
    r.timings["measure_s"] = sw.lap();
    r.pass = mu.total() == 0 && mu.mass_p_times_unit() == phi;
    return r;
}

Report run_jdr(const RunConfig& cfg0) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("jdr", cfg);
    Stopwatch sw;
    Instance I(cfg);
    auto pr = poisson_JDR(I.tau, cfg.level, I.emb);
    r.results["value"] = padic_to_json(pr.value);
    r.results["log_value"] = padic_to_json(pr.log_value);
    r.results["gamma_tau"] = {pr.gamma.a, pr.gamma.b, pr.gamma.c, pr.gamma.d};
    r.results["balls"] = pr.balls;
    r.results["total_mass"] = pr.total_mass;
    r.certificates["poisson"] = json{{"level", pr.level}, {"precision_bound", pr.level}};
    r.timings["poisson_s"] = sw.lap();
    r.pass = pr.total_mass == 0;
    return r;
}

Report run_algdep(const RunConfig& cfg0, const std::string& value) {
    RunConfig cfg = validated(cfg0);
    Report r = make_report("algdep", cfg);
    r.config["value"] = value;
    auto ctx = PadicContext::make(cfg.p, std::max(cfg.N, cfg.budget));
    PadicScalar x;
    if (value.find(',') != std::string::npos) {
        auto ab = parse_int_list(value, 2, "value a,b");
        x = PadicScalar::from_coords(ctx, ab[0], ab[1], 0, ctx->N());
    } else {
        auto slash = value.find('/');
        mpz_class num, den;
        try {
            num = mpz_class(value.substr(0, slash));
            den = mpz_class(slash == std::string::npos ? "1" : value.substr(slash + 1));
        } catch (const std::invalid_argument&) {
            throw InvalidInstance("value must be an integer, num/den, or a,b (= a + b w)");
        }
        if (den == 0) throw InvalidInstance("value has zero denominator");
        x = PadicScalar::from_rational(ctx, num, den);
    }
    Stopwatch sw;
    auto res = algdep_minimal(x, cfg.deg_bound, cfg.budget, cfg.margin());
    r.results["found"] = res.found;
    r.results["polynomial"] = res.found ? poly_to_json(res.poly) : json(nullptr);
    r.results["polynomial_str"] = res.found ? poly_str(res.poly) : "";
    r.results["degree"] = res.degree;
    r.results["height"] = res.found ? json(res.height.get_str()) : json(nullptr);
    r.certificates["algdep"] = json{{"budget", res.budget}, {"margin", res.margin},
                                    {"min_margin", cfg.margin()}, {"vanishing", res.vanishing}};
    if (!res.note.empty()) r.notes.push_back(res.note);
    r.timings["algdep_s"] = sw.lap();
    r.pass = res.found;
    return r;
}

int exit_code(const Report& r) { return r.pass ? 0 : 3; }

}  // namespace rmlab
