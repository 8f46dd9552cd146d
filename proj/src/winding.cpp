#include "rmlab/winding.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace rmlab {

namespace {

void require_inert(i64 D, i64 p) {
    if (p < 5 || !is_prime(p)) throw std::invalid_argument("p must be a prime >= 5");
    if (D % p == 0) throw std::invalid_argument("unsupported instance: p ramified in Q(sqrt D)");
    if (kronecker(D, p) != -1) throw std::invalid_argument("unsupported instance: p split in Q(sqrt D)");
}

i64 xgcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = floor_div(a, b), t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

}  // namespace

int sign_quad(i64 x, i64 y, i64 D) {
    if (y == 0) return sign(x);
    if (x == 0) return sign(y);
    if (x > 0 && y > 0) return 1;
    if (x < 0 && y < 0) return -1;
    i128 xx = static_cast<i128>(x) * x, yy = static_cast<i128>(y) * y * D;
    // x and y sqrtD have opposite signs: the larger magnitude wins
    if (xx > yy) return sign(x);
    return sign(y);
}

WeightedRMPoint WeightedRMPoint::make(i64 x, i64 y, i64 den) {
    if (den == 0) throw std::invalid_argument("WeightedRMPoint: zero denominator");
    i64 g = gcd(gcd(x, y), den);
    WeightedRMPoint w;
    w.x = x / g;
    w.y = y / g;
    w.den = den / g;
    if (w.den < 0) {
        w.x = -w.x;
        w.y = -w.y;
        w.den = -w.den;
    }
    return w;
}

std::string WeightedRMPoint::str() const {
    std::ostringstream os;
    os << "(" << x << (y >= 0 ? " + " : " - ") << (y >= 0 ? y : -y) << "*sqrtD)/" << den << " [" << weight << "]";
    return os.str();
}

bool point_less(const WeightedRMPoint& a, const WeightedRMPoint& b) {
    return std::array<i64, 4>{a.x, a.y, a.den, a.weight} < std::array<i64, 4>{b.x, b.y, b.den, b.weight};
}

int intersection_weight(const WeightedRMPoint& w, i64 D) {
    int s = w.sign(D), sc = w.sign_conj(D);
    if (sc < 0 && s > 0) return 1;
    if (s < 0 && sc > 0) return -1;
    return 0;
}

namespace {

std::vector<WeightedRMPoint> ideal_pair_points(const NarrowClassGroup& G, int cls, i64 n, i64 p, int orient) {
    i64 D = G.D();
    require_inert(D, p);
    if (n <= 0) return {};
    if (n % p == 0) throw std::invalid_argument("RM sets are only materialized for n prime to p");
    std::vector<WeightedRMPoint> out;
    for (const auto& e : enumerate_trace(n, D, p)) {
        for (const auto& d : ideal_divisors(G, e.x0, e.n0, p)) {
            if (d.cls != cls) continue;
            auto w = WeightedRMPoint::make(orient * e.x0, orient * e.n0, 2 * d.norm);
            w.weight = orient;
            w.source = WeightedRMPoint::Source::IdealPair;
            w.ideal = d.ideal;
            w.alpha_x = e.x;
            w.alpha_n = e.n;
            out.push_back(w);
        }
    }
    return out;
}

}  // namespace

std::vector<WeightedRMPoint> rm_plus_set(const NarrowClassGroup& G, const QuadForm& tau, i64 n, i64 p) {
    return ideal_pair_points(G, G.class_of_form(tau), n, p, +1);
}

std::vector<WeightedRMPoint> rm_minus_set(const NarrowClassGroup& G, const QuadForm& tau, i64 n, i64 p) {
    return ideal_pair_points(G, class_of_negated(G, tau), n, p, -1);
}

PadicScalar log_point(const WeightedRMPoint& w, const QuadEmbedding& emb) { return emb.log(w.x, w.y, w.den); }

PadicScalar weighted_log_sum(const std::vector<WeightedRMPoint>& pts, const QuadEmbedding& emb) {
    const auto& ctx = emb.ctx();
    PadicContext::Raw acc_pos{1, 0}, acc_neg{1, 0}, acc_den_pos{1, 0}, acc_den_neg{1, 0};
    // log is a homomorphism: accumulate numerators and denominators as products of units, one log each.
    const mpz_class& mod = ctx->ppow(ctx->W());
    PadicContext::Raw tmp;
    auto strip = [&](mpz_class a, mpz_class b) {
        while (a % ctx->p() == 0 && b % ctx->p() == 0 && (a != 0 || b != 0)) {
            a /= ctx->p();
            b /= ctx->p();
        }
        PadicContext::Raw r{a, b * emb.t()};
        ctx->reduce(r, mod);
        return r;
    };
    auto strip_int = [&](mpz_class a) {
        if (a < 0) a = -a;
        while (a % ctx->p() == 0) a /= ctx->p();
        PadicContext::Raw r{a, 0};
        ctx->reduce(r, mod);
        return r;
    };
    for (const auto& w : pts) {
        if (w.weight == 0) continue;
        auto num = strip(mpz_class(w.x), mpz_class(w.y));
        auto den = strip_int(mpz_class(w.den));
        for (int k = 0; k < (w.weight > 0 ? w.weight : -w.weight); ++k) {
            auto& A = w.weight > 0 ? acc_pos : acc_neg;
            auto& B = w.weight > 0 ? acc_den_pos : acc_den_neg;
            ctx->mul(tmp, A, num);
            A = tmp;
            ctx->mul(tmp, B, den);
            B = tmp;
        }
    }
    auto L = [&](const PadicContext::Raw& r) { return ctx->log_unit(r); };
    auto a = L(acc_pos), b = L(acc_neg), c = L(acc_den_pos), d = L(acc_den_neg);
    mpz_class ra = a.a - b.a - c.a + d.a, rb = a.b - b.b - c.b + d.b;
    return PadicScalar::from_coords(ctx, ra, rb, 0, ctx->N());
}

PadicScalar log_Tn_Jw(const NarrowClassGroup& G, const QuadForm& tau, i64 n, const QuadEmbedding& emb) {
    auto plus = rm_plus_set(G, tau, n, emb.ctx()->p());
    auto minus = rm_minus_set(G, tau, n, emb.ctx()->p());
    plus.insert(plus.end(), minus.begin(), minus.end());
    return weighted_log_sum(plus, emb);
}

// ---------------------------------------------------------------- coset route

std::vector<Mat2> hnf_matrices(i64 n) {
    std::vector<Mat2> out;
    for (i64 a = 1; a <= n; ++a) {
        if (n % a) continue;
        i64 d = n / a;
        for (i64 b = 0; b < d; ++b) out.push_back(Mat2{a, b, 0, d});
    }
    return out;
}

Mat2 left_hnf(const Mat2& m) {
    if (m.det() <= 0) throw std::invalid_argument("left_hnf needs positive determinant");
    i64 x, y;
    i64 g = xgcd(m.a, m.c, x, y);
    Mat2 U{x, y, -m.c / g, m.a / g};
    Mat2 h = U * m;
    i64 q = floor_div(h.b, h.d);
    h.a -= q * h.c;
    h.b -= q * h.d;
    return h;
}

CosetResult rm_set_by_cosets(const NarrowClassGroup& G, const QuadForm& tau, i64 n, i64 p) {
    i64 D = G.D();
    require_inert(D, p);
    if (n <= 0) throw std::invalid_argument("rm_set_by_cosets needs n >= 1");
    CosetResult res;
    Mat2 gam = automorph(tau);
    auto all = hnf_matrices(n);
    std::set<std::array<i64, 4>> seen;
    auto key = [](const Mat2& m) { return std::array<i64, 4>{m.a, m.b, m.c, m.d}; };
    for (const auto& d0 : all) {
        if (seen.count(key(d0))) continue;
        res.representatives.push_back(d0);
        Mat2 cur = d0;
        while (!seen.count(key(cur))) {
            seen.insert(key(cur));
            cur = left_hnf(cur * gam);
        }
    }
    for (const auto& delta : res.representatives) {
        QuadForm f = tau.act(delta);
        i64 g = gcd(gcd(f.A, f.B), f.C);
        f = {f.A / g, f.B / g, f.C / g};
        i64 Dp = f.disc();
        i64 m = isqrt(Dp / D);
        std::set<QuadForm> cyc;
        for (const auto& h : reduce_cycle(f)) cyc.insert(h);
        i64 s = isqrt(Dp);
        for (i64 B = -s; B <= s; ++B) {
            if (pos_mod(B - Dp, 2) != 0) continue;
            i64 N = (B * B - Dp) / 4;  // A*C, negative
            if (N >= 0) continue;
            i64 aN = -N;
            for (i64 a = 1; a * a <= aN; ++a) {
                if (aN % a) continue;
                for (i64 A0 : {a, aN / a}) {
                    for (i64 sg : {1, -1}) {
                        i64 A = sg * A0;
                        QuadForm h{A, B, N / A};
                        if (h.A % p == 0 || h.C % p == 0) continue;
                        if (!cyc.count(reduce_form(h))) continue;
                        auto w = WeightedRMPoint::make(-h.B, m, 2 * h.A);
                        w.weight = h.A > 0 ? 1 : -1;
                        w.source = WeightedRMPoint::Source::Coset;
                        w.delta = delta;
                        w.form = h;
                        res.points.push_back(w);
                    }
                    if (a * a == aN) break;  // the two divisors coincide
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------- fast class sums

ClassLogSums::ClassLogSums(const NarrowClassGroup& G, const QuadEmbedding& emb, int threads)
    : G_(G), emb_(emb), threads_(threads < 1 ? 1 : threads) {
    require_inert(G.D(), emb.ctx()->p());
    if (emb.D() != G.D()) throw std::invalid_argument("ClassLogSums: embedding and group disagree on D");
}

namespace {

struct PrimeInfo {
    int kind = 0;
    i64 b = 0;
    int cls1 = 0, cls2 = 0;
};

struct Factor {
    int n = 0;
    u64 q[16];
    unsigned char e[16];
    void push(u64 qq, int ee) {
        q[n] = qq;
        e[static_cast<size_t>(n)] = static_cast<unsigned char>(ee);
        ++n;
    }
};

}  // namespace

ClassLogSums::Entry ClassLogSums::compute(i64 k) const {
    const i64 D = G_.D();
    const int h = G_.order();
    const auto& ctx = emb_.ctx();
    const long p = ctx->p();
    const mpz_class& mod = ctx->ppow(ctx->W());
    Entry out;
    out.counts.assign(static_cast<size_t>(h), 0);
    std::vector<PadicContext::Raw> acc_alpha(static_cast<size_t>(h), PadicContext::Raw{1, 0});
    std::vector<mpz_class> acc_norm(static_cast<size_t>(h), mpz_class(1));

    i128 k2D = static_cast<i128>(k) * k * D;
    if (k2D > static_cast<i128>(INT64_MAX) / 2) throw std::overflow_error("trace too large for the sieve");
    i64 X = isqrt(static_cast<i64>(k2D));
    i64 xs = -X;
    if (pos_mod(xs - k * D, 2) != 0) ++xs;
    i64 count = xs > X ? 0 : (X - xs) / 2 + 1;
    i64 sq = isqrt(static_cast<i64>(k2D / 4));

    // primes up to sq with square roots of D
    std::vector<i64> primes = primes_up_to(sq < 2 ? 2 : sq);
    std::vector<i64> sD(primes.size(), -1);
    for (size_t i = 0; i < primes.size(); ++i) {
        i64 l = primes[i];
        if (l == 2) continue;
        int kr = kronecker(D, l);
        sD[i] = kr == 0 ? 0 : (kr == 1 ? sqrt_mod_prime(pos_mod(D, l), l) : -1);
    }

    std::unordered_map<u64, PrimeInfo> pinfo;
    auto info = [&](u64 q) -> const PrimeInfo& {
        auto it = pinfo.find(q);
        if (it != pinfo.end()) return it->second;
        PrimeInfo pi;
        i64 l = static_cast<i64>(q);
        pi.kind = kronecker(D, l);
        if (pi.kind != -1) {
            auto P = G_.field().primes_above(l);
            pi.b = P[0].b;
            auto cls_of = [&](i64 b) {
                i128 c = (static_cast<i128>(b) * b - D) / (4 * static_cast<i128>(l));
                return G_.class_of_form(QuadForm{l, -b, static_cast<i64>(c)});
            };
            pi.cls1 = cls_of(P[0].b);
            pi.cls2 = pi.kind == 1 ? cls_of(P[1].b) : pi.cls1;
        }
        return pinfo.emplace(q, pi).first->second;
    };

    mpz_class inv2;
    {
        mpz_class two(2);
        mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), mod.get_mpz_t());
    }
    const mpz_class tinv2 = emb_.t() * inv2 % mod;

    const i64 CH = 1 << 15;
    std::vector<u64> rem;
    std::vector<Factor> facs;
    std::vector<std::pair<int, u64>> divs, ndivs;
    std::vector<i64> local_cnt(static_cast<size_t>(h));
    PadicContext::Raw alpha, tmp;
    for (i64 i0 = 0; i0 < count; i0 += CH) {
        i64 len = std::min(CH, count - i0);
        rem.assign(static_cast<size_t>(len), 0);
        facs.assign(static_cast<size_t>(len), Factor{});
        for (i64 i = 0; i < len; ++i) {
            i64 x = xs + 2 * (i0 + i);
            rem[static_cast<size_t>(i)] = static_cast<u64>((k2D - static_cast<i128>(x) * x) / 4);
        }
        for (i64 i = 0; i < len; ++i) {
            u64& r = rem[static_cast<size_t>(i)];
            int e = 0;
            while (r % 2 == 0) {
                r /= 2;
                ++e;
            }
            if (e) facs[static_cast<size_t>(i)].push(2, e);
        }
        for (size_t pi = 0; pi < primes.size(); ++pi) {
            i64 l = primes[pi];
            if (l == 2) continue;
            i64 roots[2];
            int nr = 0;
            if (k % l == 0 || D % l == 0) {
                roots[nr++] = 0;
            } else {
                if (sD[pi] < 0) continue;
                i64 r = mul_mod(k, sD[pi], l);
                roots[nr++] = r;
                if (r != 0 && l - r != r) roots[nr++] = l - r;
            }
            i64 inv2l = (l + 1) / 2;
            for (int ri = 0; ri < nr; ++ri) {
                i64 j0 = mul_mod(pos_mod(roots[ri] - xs, l), inv2l, l);  // global index class
                i64 start = i0 + pos_mod(j0 - i0, l);
                for (i64 j = start; j < i0 + len; j += l) {
                    u64& r = rem[static_cast<size_t>(j - i0)];
                    int e = 0;
                    while (r % static_cast<u64>(l) == 0) {
                        r /= static_cast<u64>(l);
                        ++e;
                    }
                    if (e) facs[static_cast<size_t>(j - i0)].push(static_cast<u64>(l), e);
                }
            }
        }
        for (i64 i = 0; i < len; ++i) {
            i64 x = xs + 2 * (i0 + i);
            if (k % p == 0 && x % p == 0) continue;  // not p-primitive
            Factor& F = facs[static_cast<size_t>(i)];
            if (rem[static_cast<size_t>(i)] > 1) F.push(rem[static_cast<size_t>(i)], 1);
            i64 g = gcd(x, k);
            if (pos_mod(x / g - (k / g) * D, 2) != 0) g /= 2;
            i64 x1 = x / g, n1 = k / g;
            divs.assign(1, {0, 1});
            auto extend = [&](int c, u64 nq, int E) {
                if (E == 0) return;
                ndivs.clear();
                for (auto [dc, dn] : divs) {
                    int cc = dc;
                    u64 nn = dn;
                    ndivs.push_back({cc, nn});
                    for (int j = 1; j <= E; ++j) {
                        cc = G_.compose(cc, c);
                        nn *= nq;
                        ndivs.push_back({cc, nn});
                    }
                }
                divs.swap(ndivs);
            };
            for (int fi = 0; fi < F.n; ++fi) {
                u64 q = F.q[fi];
                int e = F.e[fi];
                int eg = 0;
                {
                    i64 gg = g;
                    while (gg % static_cast<i64>(q) == 0) {
                        gg /= static_cast<i64>(q);
                        ++eg;
                    }
                }
                int eN1 = e - 2 * eg;
                const PrimeInfo& pi = info(q);
                if (pi.kind == -1) {
                    extend(0, q * q, eg);
                } else if (pi.kind == 0) {
                    extend(pi.cls1, q, 2 * eg + eN1);
                } else {
                    i128 test = (static_cast<i128>(x1) - static_cast<i128>(n1) * pi.b) / 2;
                    bool inP = test % static_cast<i128>(q) == 0;
                    extend(pi.cls1, q, eg + (inP ? eN1 : 0));
                    extend(pi.cls2, q, eg + (inP ? 0 : eN1));
                }
            }
            std::fill(local_cnt.begin(), local_cnt.end(), 0);
            for (auto [dc, dn] : divs) {
                ++local_cnt[static_cast<size_t>(dc)];
                mpz_class& an = acc_norm[static_cast<size_t>(dc)];
                mpz_mul_ui(an.get_mpz_t(), an.get_mpz_t(), static_cast<unsigned long>(dn));
                mpz_tdiv_r(an.get_mpz_t(), an.get_mpz_t(), mod.get_mpz_t());
            }
            alpha.a = mpz_class(static_cast<long>(x)) * inv2;
            alpha.b = mpz_class(static_cast<long>(k)) * tinv2;
            ctx->reduce(alpha, mod);
            for (int c = 0; c < h; ++c) {
                i64 m = local_cnt[static_cast<size_t>(c)];
                if (!m) continue;
                out.counts[static_cast<size_t>(c)] += m;
                auto& A = acc_alpha[static_cast<size_t>(c)];
                if (m == 1) {
                    ctx->mul(tmp, A, alpha);
                } else {
                    ctx->mul(tmp, A, ctx->pow(alpha, mpz_class(static_cast<long>(m))));
                }
                A = tmp;
            }
        }
    }
    out.sums.reserve(static_cast<size_t>(h));
    for (int c = 0; c < h; ++c) {
        if (out.counts[static_cast<size_t>(c)] == 0) {
            out.sums.push_back(PadicScalar::zero(ctx, ctx->N()));
            continue;
        }
        auto La = ctx->log_unit(acc_alpha[static_cast<size_t>(c)]);
        mpz_class Ln = ctx->log_unit_scalar(acc_norm[static_cast<size_t>(c)]);
        out.sums.push_back(PadicScalar::from_coords(ctx, La.a - Ln, La.b, 0, ctx->N()));
    }
    return out;
}

void ClassLogSums::precompute(const std::vector<i64>& ks_in) {
    std::vector<i64> ks;
    {
        std::lock_guard<std::mutex> lock(mu_);
        std::set<i64> uniq(ks_in.begin(), ks_in.end());
        for (i64 k : uniq)
            if (!cache_.count(k)) ks.push_back(k);
    }
    std::sort(ks.rbegin(), ks.rend());  // largest first for load balance
    std::vector<Entry> results(ks.size());
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads_));
    auto work = [&](int tid) {
        try {
            for (size_t i = next++; i < ks.size(); i = next++) results[i] = compute(ks[i]);
        } catch (...) {
            errors[static_cast<size_t>(tid)] = std::current_exception();
        }
    };
    if (threads_ == 1 || ks.size() <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads_; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::lock_guard<std::mutex> lock(mu_);
    for (size_t i = 0; i < ks.size(); ++i) cache_.emplace(ks[i], std::move(results[i]));
}

const std::vector<PadicScalar>& ClassLogSums::at(i64 k) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second.sums;
    }
    precompute({k});
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.at(k).sums;
}

const std::vector<i64>& ClassLogSums::counts(i64 k) {
    at(k);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.at(k).counts;
}

namespace {

std::vector<i64> depth_traces(i64 n, i64 p, int K) {
    int v = 0;
    i64 n0 = n;
    while (n0 % p == 0) {
        n0 /= p;
        ++v;
    }
    std::vector<i64> ks;
    i64 k = n0;
    for (int t = 0; t <= K + v; ++t) {
        ks.push_back(k);
        k *= p;
    }
    return ks;
}

}  // namespace

PadicScalar log_Tn_Jw_depth(ClassLogSums& sums, const QuadForm& tau, i64 n, int K) {
    const auto& G = sums.group();
    const auto& ctx = sums.embedding().ctx();
    int cp = G.class_of_form(tau), cm = class_of_negated(G, tau);
    auto ks = depth_traces(n, ctx->p(), K);
    sums.precompute(ks);
    PadicScalar total = PadicScalar::zero(ctx, ctx->N());
    if (cp == cm) return total;  // the two sets coincide and cancel exactly
    for (i64 k : ks) {
        const auto& S = sums.at(k);
        total += S[static_cast<size_t>(cp)] - S[static_cast<size_t>(cm)];
    }
    return total;
}

std::vector<PadicScalar> winding_series(ClassLogSums& sums, const QuadForm& tau, i64 nmax, int K) {
    const auto& ctx = sums.embedding().ctx();
    std::vector<i64> all;
    for (i64 n = 1; n <= nmax; ++n) {
        auto ks = depth_traces(n, ctx->p(), K);
        all.insert(all.end(), ks.begin(), ks.end());
    }
    sums.precompute(all);
    std::vector<PadicScalar> out(static_cast<size_t>(nmax + 1), PadicScalar::zero(ctx, ctx->N()));
    for (i64 n = 1; n <= nmax; ++n) out[static_cast<size_t>(n)] = log_Tn_Jw_depth(sums, tau, n, K);
    return out;
}

PadicScalar wynn_epsilon(const std::vector<PadicScalar>& s) {
    if (s.empty()) throw std::invalid_argument("wynn_epsilon needs at least one term");
    const auto& ctx = s.front().ctx();
    std::vector<PadicScalar> prev(s.size() + 1, PadicScalar::zero(ctx)), cur = s;
    PadicScalar best = s.back();
    for (size_t k = 1; cur.size() > 1; ++k) {
        std::vector<PadicScalar> next;
        for (size_t i = 0; i + 1 < cur.size(); ++i) {
            auto d = cur[i + 1] - cur[i];
            if (d.is_zero()) return best;
            next.push_back(prev[i + 1] + d.inverse());
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

AcceleratedSeries winding_series_accelerated(ClassLogSums& sums, const QuadForm& tau, i64 nmax, int K) {
    if (K < 0) throw std::invalid_argument("depth must be >= 0");
    std::vector<std::vector<PadicScalar>> layers;
    layers.push_back(winding_series(sums, tau, nmax, K));  // precomputes every trace needed below
    for (int k = K - 1; k >= 0; --k) layers.push_back(winding_series(sums, tau, nmax, k));
    AcceleratedSeries out;
    out.raw = layers.front();
    out.accelerated = out.raw;
    for (i64 n = 1; n <= nmax; ++n) {
        std::vector<PadicScalar> seq;
        for (auto it = layers.rbegin(); it != layers.rend(); ++it) seq.push_back((*it)[static_cast<size_t>(n)]);
        out.accelerated[static_cast<size_t>(n)] = wynn_epsilon(seq);
    }
    return out;
}

}  // namespace rmlab
