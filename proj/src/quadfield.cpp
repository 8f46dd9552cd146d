#include "rmlab/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rmlab {

namespace {

i64 checked(i128 v) {
    if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
        throw std::overflow_error("64-bit overflow in quadratic field arithmetic");
    return static_cast<i64>(v);
}

// floor((P + sqrt D)/Q) for Q != 0, s = floor(sqrt D), D not a square.
i64 floor_root(i64 P, i64 Q, i64 s) {
    if (Q > 0) return floor_div(P + s, Q);
    return -floor_div(P + s, -Q) - 1;
}

// extended gcd: returns g = gcd(a,b) >= 0 and x, y with ax + by = g
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = floor_div(a, b);
        i64 t = a - q * b;
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

std::string Mat2::str() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

std::string QuadForm::str() const {
    std::ostringstream os;
    os << "(" << A << "," << B << "," << C << ")";
    return os.str();
}

std::string IdealF::str() const {
    std::ostringstream os;
    os << "[" << a << ", " << b << " + " << c << "w]";
    return os.str();
}

QuadForm QuadForm::act(const Mat2& g) const {
    const i128 a = g.a, b = g.b, c = g.c, d = g.d;
    return {checked(A * d * d - B * c * d + C * c * c), checked(-2 * A * b * d + B * (a * d + b * c) - 2 * C * a * c),
            checked(A * b * b - B * a * b + C * a * a)};
}

QuadForm QuadForm::compose_right(const Mat2& M) const {
    const i128 a = M.a, b = M.b, c = M.c, d = M.d;
    return {checked(A * a * a + B * a * c + C * c * c), checked(2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d),
            checked(A * b * b + B * b * d + C * d * d)};
}

QuadForm make_form(i64 A, i64 B, i64 C) {
    QuadForm f{A, B, C};
    i64 D = f.disc();
    if (D <= 0) throw std::invalid_argument("form " + f.str() + " is not indefinite (discriminant must be positive)");
    if (is_square(D)) throw std::invalid_argument("form " + f.str() + " has square discriminant");
    if (!f.primitive()) throw std::invalid_argument("form " + f.str() + " is not primitive (gcd(A,B,C) != 1)");
    return f;
}

bool is_reduced(const QuadForm& f) {
    i64 D = f.disc();
    i64 s = isqrt(D);
    i64 a2 = 2 * (f.A < 0 ? -f.A : f.A);
    return f.B >= 1 && f.B <= s && a2 >= s - f.B + 1 && a2 <= s + f.B;
}

QuadForm rho(const QuadForm& f, Mat2* step) {
    i64 D = f.disc();
    i64 s = isqrt(D);
    i64 c = f.C;
    if (c == 0) throw std::domain_error("rho: zero coefficient (square discriminant?)");
    i64 ac = c < 0 ? -c : c;
    i64 bn;
    if (ac <= s) {
        bn = s - pos_mod(s + f.B, 2 * ac);
    } else {
        bn = pos_mod(-f.B, 2 * ac);
        if (bn > ac) bn -= 2 * ac;
    }
    i64 t = (bn + f.B) / (2 * c);
    Mat2 M{0, -1, 1, t};
    if (step) *step = M;
    QuadForm g = f.compose_right(M);
    return g;
}

QuadForm reduce_form(const QuadForm& f, Mat2* transform) {
    QuadForm g = f;
    Mat2 total;
    for (int it = 0; !is_reduced(g); ++it) {
        if (it > 100000) throw std::runtime_error("reduce_form did not terminate");
        Mat2 M;
        g = rho(g, &M);
        total = total * M;
    }
    if (transform) *transform = total;
    return g;
}

std::vector<QuadForm> reduce_cycle(const QuadForm& f) {
    i64 D = f.disc();
    if (D <= 0 || is_square(D)) throw std::invalid_argument("reduce_cycle needs a positive non-square discriminant");
    QuadForm g = reduce_form(f);
    std::vector<QuadForm> cyc{g};
    QuadForm h = rho(g);
    while (!(h == g)) {
        cyc.push_back(h);
        h = rho(h);
        if (cyc.size() > 1000000) throw std::runtime_error("reduce_cycle did not close");
    }
    return cyc;
}

bool properly_equivalent(const QuadForm& f, const QuadForm& g) {
    if (f.disc() != g.disc()) return false;
    QuadForm rg = reduce_form(g);
    for (const auto& h : reduce_cycle(f))
        if (h == rg) return true;
    return false;
}

QuadForm principal_form(i64 D) {
    i64 s = isqrt(D);
    i64 b = (pos_mod(s - D, 2) == 0) ? s : s - 1;
    return {1, b, (b * b - D) / 4};
}

std::pair<i64, i64> pell4(i64 D) {
    if (D <= 0 || is_square(D)) throw std::invalid_argument("pell4 needs a positive non-square D");
    QuadForm f0 = principal_form(D);
    // product of rho steps around the cycle is an automorph of f0, and generates the proper automorphisms
    QuadForm g = f0;
    Mat2 total;
    do {
        Mat2 M;
        g = rho(g, &M);
        total = total * M;
    } while (!(g == f0));
    i64 t = total.trace();
    i64 u = total.c / f0.A;
    if (t < 0) t = -t;
    if (u < 0) u = -u;
    if (static_cast<i128>(t) * t - static_cast<i128>(D) * u * u != 4)
        throw std::logic_error("pell4: cycle product is not a unit");
    return {t, u};
}

Mat2 automorph(const QuadForm& f) {
    auto [t, u] = pell4(f.disc());
    return {(t - f.B * u) / 2, -f.C * u, f.A * u, (t + f.B * u) / 2};
}

bool has_norm_minus_one(i64 D) {
    QuadForm f0 = principal_form(D);
    return properly_equivalent(f0, f0.negated_root());
}

// ---------------------------------------------------------------- QuadField

QuadField::QuadField(i64 D) : D_(D) {
    if (!is_fundamental_discriminant(D) || D <= 1)
        throw std::invalid_argument("discriminant " + std::to_string(D) +
                                    " is not a positive fundamental discriminant (unsupported)");
    s_ = isqrt(D);
}

QuadInt QuadField::mul(const QuadInt& x, const QuadInt& y) const {
    i128 n = (static_cast<i128>(D_) * D_ - D_) / 4;
    i128 vv = static_cast<i128>(x.v) * y.v;
    return {checked(static_cast<i128>(x.u) * y.u - vv * n),
            checked(static_cast<i128>(x.u) * y.v + static_cast<i128>(x.v) * y.u + vv * D_)};
}

i64 QuadField::norm(const QuadInt& x) const {
    i128 n = (static_cast<i128>(D_) * D_ - D_) / 4;
    return checked(static_cast<i128>(x.u) * x.u + static_cast<i128>(D_) * x.u * x.v + n * x.v * x.v);
}

QuadInt QuadField::from_half(i64 x, i64 y) const {
    // (x + y sqrt D)/2 = (x - yD)/2 + y omega
    if (pos_mod(x - y * D_, 2) != 0) throw std::invalid_argument("from_half: parity mismatch");
    return {(x - y * D_) / 2, y};
}

IdealF QuadField::hnf(const std::vector<QuadInt>& gens) const {
    // Rational generators first so every u-coordinate can be reduced modulo a as we go.
    i128 a = 0, b = 0;
    i64 c = 0;
    auto g128 = [](i128 x, i128 y) {
        if (x < 0) x = -x;
        if (y < 0) y = -y;
        while (y != 0) {
            i128 t = x % y;
            x = y;
            y = t;
        }
        return x;
    };
    auto red = [&](i128 u) { return a > 0 ? ((u % a) + a) % a : u; };
    for (const auto& g : gens)
        if (g.v == 0) a = g128(a, g.u);
    for (const auto& g : gens) {
        if (g.v == 0) continue;
        i128 u = red(g.u);
        i64 v = g.v;
        if (c == 0) {
            b = u;
            c = v;
            continue;
        }
        i64 x, y;
        i64 gg = ext_gcd(c, v, x, y);
        i128 nb = red(red(static_cast<i128>(x) * red(b)) + red(static_cast<i128>(y) * u));
        i128 rem = red(static_cast<i128>(v / gg) * red(b)) - red(static_cast<i128>(c / gg) * u);
        a = g128(a, rem);
        b = red(nb);
        c = gg;
    }
    if (a == 0 || c == 0) throw std::invalid_argument("hnf: generators do not span a full-rank lattice");
    if (c < 0) {
        c = -c;
        b = -b;
    }
    b = ((b % a) + a) % a;
    return {checked(a), checked(b), c};
}

IdealF QuadField::ideal_mul(const IdealF& I, const IdealF& J) const {
    QuadInt a1{I.a, 0}, b1{I.b, I.c}, a2{J.a, 0}, b2{J.b, J.c};
    return hnf({mul(a1, a2), mul(a1, b2), mul(b1, a2), mul(b1, b2)});
}

IdealF QuadField::principal_ideal(const QuadInt& x) const { return hnf({x, mul(x, QuadInt{0, 1})}); }

bool QuadField::contains(const IdealF& I, const QuadInt& x) const {
    if (x.v % I.c != 0) return false;
    i128 r = static_cast<i128>(x.u) - static_cast<i128>(x.v / I.c) * I.b;
    return r % I.a == 0;
}

bool QuadField::divides(const IdealF& I, const IdealF& J) const {
    return contains(I, QuadInt{J.a, 0}) && contains(I, QuadInt{J.b, J.c});
}

bool QuadField::is_ideal(const IdealF& I) const {
    QuadInt w{0, 1};
    return contains(I, mul(QuadInt{I.a, 0}, w)) && contains(I, mul(QuadInt{I.b, I.c}, w));
}

QuadForm QuadField::form_of_ideal(const IdealF& I) const {
    QuadInt beta{I.b, I.c};
    i64 A = I.a / I.c;
    i64 B = -(2 * I.b + D_ * I.c) / I.c;
    i64 C = norm(beta) / (I.a * I.c);
    return {A, B, C};
}

IdealF QuadField::ideal_of_form(const QuadForm& f) const {
    if (f.A <= 0) throw std::invalid_argument("ideal_of_form needs A > 0");
    return {f.A, pos_mod((-f.B - D_) / 2, f.A), 1};
}

std::vector<QuadField::PrimeIdeal> QuadField::primes_above(i64 ell) const {
    std::vector<PrimeIdeal> out;
    int k = kronecker(D_, ell);
    if (k == -1) {
        out.push_back({IdealF{ell, 0, ell}, ell, -1, 0});
        return out;
    }
    i64 b = -1;
    if (ell == 2) {
        for (i64 cand = 0; cand < 4; ++cand)
            if (pos_mod(cand * cand - D_, 8) == 0) {
                b = cand;
                break;
            }
    } else {
        // root of b^2 = D mod l, lifted to the parity of D (then b^2 = D mod 4l)
        b = k == 0 ? 0 : sqrt_mod_prime(pos_mod(D_, ell), ell);
        if (pos_mod(b - D_, 2) != 0) b += ell;
    }
    if (b < 0) throw std::logic_error("primes_above: no square root of D mod 4l");
    auto make = [&](i64 bb) { return IdealF{ell, pos_mod((bb - D_) / 2, ell), 1}; };
    if (k == 0) {
        out.push_back({make(b), ell, 0, b});
    } else {
        out.push_back({make(b), ell, 1, b});
        out.push_back({make(-b), ell, 1, -b});
    }
    return out;
}

// ---------------------------------------------------------------- class group

NarrowClassGroup::NarrowClassGroup(i64 D) : D_(D), K_(D) {
    i64 s = isqrt(D);
    std::vector<QuadForm> reduced;
    for (i64 B = 1; B <= s; ++B) {
        if (pos_mod(B - D, 2) != 0) continue;
        i64 N = (B * B - D) / 4;  // = A*C < 0
        for (i64 a2 = s - B + 1; a2 <= s + B; ++a2) {
            if (a2 % 2) continue;
            i64 A = a2 / 2;
            if (A == 0 || N % A != 0) continue;
            for (i64 sg : {1, -1}) {
                QuadForm f{sg * A, B, N / (sg * A)};
                if (f.primitive() && is_reduced(f)) reduced.push_back(f);
            }
        }
    }
    std::sort(reduced.begin(), reduced.end());
    QuadForm f0 = principal_form(D);
    auto add_cycle = [&](const QuadForm& f) {
        auto cyc = reduce_cycle(f);
        int idx = static_cast<int>(cycles_.size());
        for (const auto& g : cyc) lookup_[g] = idx;
        cycles_.push_back(cyc);
    };
    add_cycle(f0);
    for (const auto& f : reduced)
        if (!lookup_.count(f)) add_cycle(f);
    for (const auto& cyc : cycles_) {
        auto it = std::find_if(cyc.begin(), cyc.end(), [](const QuadForm& g) { return g.A > 0; });
        if (it == cyc.end()) throw std::logic_error("cycle without positive leading coefficient");
        ideals_.push_back(K_.ideal_of_form(*it));
    }
    int h = order();
    table_.assign(static_cast<size_t>(h), std::vector<int>(static_cast<size_t>(h), 0));
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
            table_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                class_of_ideal(K_.ideal_mul(ideals_[static_cast<size_t>(i)], ideals_[static_cast<size_t>(j)]));
    diff_ = class_of_form(f0.negated_root());
}

int NarrowClassGroup::class_of_form(const QuadForm& f) const {
    if (f.disc() != D_) throw std::invalid_argument("class_of_form: discriminant mismatch for " + f.str());
    auto it = lookup_.find(reduce_form(f));
    if (it == lookup_.end()) throw std::logic_error("class_of_form: reduced form not found");
    return it->second;
}

int NarrowClassGroup::inverse(int x) const {
    for (int y = 0; y < order(); ++y)
        if (compose(x, y) == 0) return y;
    throw std::logic_error("class group: no inverse");
}

int NarrowClassGroup::power(int x, i64 e) const {
    if (e < 0) return power(inverse(x), -e);
    int r = 0;
    for (i64 i = 0; i < e; ++i) r = compose(r, x);
    return r;
}

std::vector<Character> NarrowClassGroup::quadratic_characters() const {
    int h = order();
    // greedy generating set
    std::vector<int> gens;
    std::vector<char> in(static_cast<size_t>(h), 0);
    in[0] = 1;
    auto close = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int x = 0; x < h; ++x) {
                if (!in[static_cast<size_t>(x)]) continue;
                for (int g : gens) {
                    int y = compose(x, g);
                    if (!in[static_cast<size_t>(y)]) {
                        in[static_cast<size_t>(y)] = 1;
                        changed = true;
                    }
                }
            }
        }
    };
    for (int x = 0; x < h; ++x) {
        if (in[static_cast<size_t>(x)]) continue;
        gens.push_back(x);
        close();
    }
    std::vector<Character> out;
    size_t k = gens.size();
    for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
        Character psi(static_cast<size_t>(h), 0);
        psi[0] = 1;
        std::vector<int> queue{0};
        bool ok = true;
        for (size_t qi = 0; qi < queue.size() && ok; ++qi) {
            int x = queue[qi];
            for (size_t i = 0; i < k && ok; ++i) {
                int y = compose(x, gens[i]);
                int val = psi[static_cast<size_t>(x)] * ((mask >> i) & 1 ? -1 : 1);
                if (psi[static_cast<size_t>(y)] == 0) {
                    psi[static_cast<size_t>(y)] = val;
                    queue.push_back(y);
                } else if (psi[static_cast<size_t>(y)] != val) {
                    ok = false;
                }
            }
        }
        if (ok) out.push_back(psi);
    }
    return out;
}

std::vector<Character> NarrowClassGroup::odd_characters() const {
    std::vector<Character> out;
    for (auto& psi : quadratic_characters())
        if (psi[static_cast<size_t>(diff_)] == -1) out.push_back(psi);
    return out;
}

std::vector<QuadForm> NarrowClassGroup::zagier_cycle(int cls) const {
    // Zagier-reduced forms: A > 0, C > 0, A + B + C < 0; they satisfy |B| + A + C <= D.
    i64 s = isqrt(D_);
    std::optional<QuadForm> start;
    for (i64 A = 1; A <= D_ && !start; ++A)
        for (i64 C = 1; A + C <= D_ && !start; ++C) {
            i64 B2 = D_ + 4 * A * C;
            if (!is_square(B2)) continue;
            QuadForm f{A, -isqrt(B2), C};
            if (f.A + f.B + f.C < 0 && f.primitive() && class_of_form(f) == cls) start = f;
        }
    if (!start) throw std::logic_error("zagier_cycle: no reduced form in class");
    std::vector<QuadForm> cyc;
    QuadForm f = *start;
    do {
        cyc.push_back(f);
        i64 b = floor_root(-f.B, 2 * f.A, s) + 1;  // ceil of the first root
        f = f.act(Mat2{0, 1, -1, b});
        if (cyc.size() > 1000000) throw std::runtime_error("zagier_cycle did not close");
    } while (!(f == *start));
    return cyc;
}

mpq_class NarrowClassGroup::partial_zeta_zero(int cls) const {
    // The zeta function of the class C sums over x in a lattice of class C^{-1}.
    i64 s = isqrt(D_);
    mpq_class total = 0;
    for (const auto& f : zagier_cycle(inverse(cls))) {
        i64 b = floor_root(-f.B, 2 * f.A, s) + 1;
        total += mpq_class(b - 3, 12);
    }
    total.canonicalize();
    return total;
}

mpq_class NarrowClassGroup::partial_zeta_zero_shintani(int cls) const {
    int inv = inverse(cls);
    const auto& cyc = cycles_[static_cast<size_t>(inv)];
    auto it = std::find_if(cyc.begin(), cyc.end(), [](const QuadForm& g) { return g.A > 0; });
    const QuadForm& f = *it;
    auto [t, u] = pell4(D_);
    // lattice Z + Z tau, tau = (-B + sqrt D)/(2A); eps = (t + u sqrt D)/2 = m + k tau
    i64 m = (t + u * f.B) / 2;
    i64 k = u * f.A;
    auto B1 = [](const mpq_class& y) { return mpq_class(y - mpq_class(1, 2)); };
    auto B2 = [](const mpq_class& y) { return mpq_class(y * y - y + mpq_class(1, 6)); };
    mpq_class total = 0;
    for (i64 j = 0; j < k; ++j) {
        mpq_class y2(j, k);
        y2.canonicalize();
        i64 num = pos_mod(-m * j, k);
        mpq_class y1(num == 0 ? k : num, k);
        y1.canonicalize();
        total += B1(y1) * B1(y2) + mpq_class(t, 4) * (B2(y1) + B2(y2));
    }
    total.canonicalize();
    return total;
}

// ---------------------------------------------------------------- embeddings

QuadEmbedding::QuadEmbedding(PadicCtx ctx, i64 D, bool conjugate) : ctx_(std::move(ctx)), D_(D) {
    long p = ctx_->p();
    if (D % p == 0) throw std::invalid_argument("p divides the discriminant (ramified)");
    if (kronecker(D, p) != -1) throw std::invalid_argument("p is split in Q(sqrt D); only inert p supported");
    const mpz_class& mod = ctx_->ppow(ctx_->W());
    mpz_class rinv, r(ctx_->r());
    mpz_invert(rinv.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    mpz_class q = mpz_class(D) * rinv % mod;
    t_ = ctx_->sqrt_scalar(q);
    if (conjugate) t_ = (mod - t_) % mod;
}

PadicScalar QuadEmbedding::embed(const mpz_class& x, const mpz_class& y, const mpz_class& den) const {
    auto v = PadicScalar::from_coords(ctx_, x, y * t_, 0, ctx_->W());
    if (den == 1) return v;
    return v / PadicScalar::from_int(ctx_, den);
}

PadicContext::Raw QuadEmbedding::log_raw(const mpz_class& x, const mpz_class& y) const {
    long p = ctx_->p();
    mpz_class a = x, b = y;
    if (a == 0 && b == 0) throw std::domain_error("log of zero");
    while (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p)) &&
           mpz_divisible_ui_p(b.get_mpz_t(), static_cast<unsigned long>(p))) {
        a /= p;
        b /= p;
    }
    PadicContext::Raw u{a, b * t_};
    ctx_->reduce(u, ctx_->ppow(ctx_->W()));
    return ctx_->log_unit(u);
}

PadicScalar QuadEmbedding::log(const mpz_class& x, const mpz_class& y, const mpz_class& den) const {
    auto L = log_raw(x, y);
    if (den != 1) {
        mpz_class d = den < 0 ? mpz_class(-den) : den;
        while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(ctx_->p()))) d /= ctx_->p();
        L.a -= ctx_->log_unit_scalar(d);
        ctx_->reduce(L, ctx_->ppow(ctx_->W()));
    }
    return PadicScalar::from_coords(ctx_, L.a, L.b, 0, ctx_->N());
}

RMPoint RMPoint::make(const QuadForm& f) {
    RMPoint r;
    r.form = make_form(f.A, f.B, f.C);
    double sq = std::sqrt(static_cast<double>(f.disc()));
    r.tau = (-static_cast<double>(f.B) + sq) / (2.0 * static_cast<double>(f.A));
    r.tau_conj = (-static_cast<double>(f.B) - sq) / (2.0 * static_cast<double>(f.A));
    return r;
}

PadicScalar RMPoint::padic(const QuadEmbedding& emb) const { return emb.embed(-form.B, 1, 2 * form.A); }

int class_of_rm_point(const NarrowClassGroup& G, const RMPoint& tau) { return G.class_of_form(tau.form); }

int class_of_negated(const NarrowClassGroup& G, const QuadForm& f) { return G.class_of_form(f.negated_root()); }

// ---------------------------------------------------------------- traces and divisors

std::vector<TotallyPositiveElement> enumerate_trace(i64 n, i64 D, i64 p) {
    std::vector<TotallyPositiveElement> out;
    if (n <= 0) return out;
    i64 bound = isqrt(checked(static_cast<i128>(n) * n * D));  // |x| <= bound, x^2 < n^2 D since non-square
    i64 start = -bound;
    if (pos_mod(start - n * D, 2) != 0) ++start;
    for (i64 x = start; x <= bound; x += 2) {
        TotallyPositiveElement e;
        e.x = x;
        e.n = n;
        e.vp = 0;
        e.x0 = x;
        e.n0 = n;
        if (p > 1) {
            while (e.n0 % p == 0 && e.x0 % p == 0) {
                e.n0 /= p;
                e.x0 /= p;
                ++e.vp;
            }
        }
        out.push_back(e);
    }
    return out;
}

std::vector<PrimeExponent> factor_element(const QuadField& K, i64 x, i64 n) {
    i64 D = K.D();
    i64 g = gcd(x, n);
    if (g == 0) throw std::domain_error("factor_element of zero");
    if (pos_mod(x / g - (n / g) * D, 2) != 0) g /= 2;
    i64 x1 = x / g, n1 = n / g;
    i128 N1w = (static_cast<i128>(n1) * n1 * D - static_cast<i128>(x1) * x1) / 4;
    i64 N1 = checked(N1w < 0 ? -N1w : N1w);
    std::set<i64> ells;
    for (auto& [q, e] : factorize(g)) ells.insert(q);
    for (auto& [q, e] : factorize(N1)) ells.insert(q);
    std::vector<PrimeExponent> out;
    for (i64 ell : ells) {
        int eg = g % ell == 0 ? valuation(g, ell) : 0;
        int eN = N1 % ell == 0 ? valuation(N1, ell) : 0;
        auto primes = K.primes_above(ell);
        if (primes.front().kind == -1) {
            if (eN != 0) throw std::logic_error("factor_element: inert prime divides a content-free norm");
            out.push_back({primes.front(), eg});
        } else if (primes.front().kind == 0) {
            out.push_back({primes.front(), 2 * eg + eN});
        } else {
            const auto& P = primes[0];
            // alpha_1 = (x1 + n1 sqrtD)/2 lies in [l, (b + sqrtD)/2] iff (x1 - n1 b)/2 = 0 mod l
            i128 test = (static_cast<i128>(x1) - static_cast<i128>(n1) * P.b) / 2;
            bool inP = test % ell == 0;
            out.push_back({primes[0], eg + (inP ? eN : 0)});
            out.push_back({primes[1], eg + (inP ? 0 : eN)});
        }
    }
    return out;
}

std::vector<IdealDivisor> ideal_divisors(const NarrowClassGroup& G, i64 x, i64 n, i64 p) {
    const QuadField& K = G.field();
    std::vector<IdealF> divs{IdealF{1, 0, 1}};
    for (const auto& pe : factor_element(K, x, n)) {
        if (pe.exponent == 0) continue;
        if (p > 1 && pe.prime.ell == p) continue;  // p inert: p does not divide I
        std::vector<IdealF> next;
        for (const auto& I : divs) {
            IdealF J = I;
            next.push_back(J);
            for (int j = 1; j <= pe.exponent; ++j) {
                J = K.ideal_mul(J, pe.prime.ideal);
                next.push_back(J);
            }
        }
        divs.swap(next);
    }
    std::vector<IdealDivisor> out;
    out.reserve(divs.size());
    for (const auto& I : divs) out.push_back({I, I.norm(), G.class_of_ideal(I)});
    std::sort(out.begin(), out.end(), [](const IdealDivisor& a, const IdealDivisor& b) { return a.ideal < b.ideal; });
    return out;
}

}  // namespace rmlab
