#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmlab/arith.hpp"
#include "rmlab/padic.hpp"

namespace rmlab {

// Truncated q-expansion a_0 + a_1 q + ... + a_nmax q^nmax over Q_{p^2}.
struct QSeries {
    std::vector<PadicScalar> coeffs;
    long level = 1;
    int weight = 2;
    bool constant_known = true;  // false while a_0 is an unknown slot

    i64 nmax() const { return static_cast<i64>(coeffs.size()) - 1; }
    const PadicScalar& operator[](i64 n) const { return coeffs.at(static_cast<size_t>(n)); }
    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries scaled(const PadicScalar& c) const;
    QSeries truncated(i64 nmax) const;
};

QSeries series_from_ints(const PadicCtx& ctx, const std::vector<i64>& a, long level);

// Integer coefficients of E_2^{(p)} = p - 1 + 24 sum sigma^{(p)}(n) q^n.
std::vector<i64> e2p_coefficients(long p, i64 nmax);
QSeries e2p_series(const PadicCtx& ctx, long p, i64 nmax);

// q prod (1 - q^n)^2 (1 - q^{11 n})^2, the newform of level 11.
std::vector<i64> eta_cusp_coefficients(long level, i64 nmax);
QSeries eta_cusp_series(const PadicCtx& ctx, long level, i64 nmax);

// Weight-2 Hecke operator on Gamma_0(level): T_l for l !| level, U_l for l | level.
// The result is truncated to floor(nmax / l).
QSeries hecke_Tn(const QSeries& s, long ell);

// Basis of M_2(Gamma_0(p)) used for fits: E_2^{(p)} first, then the cusp forms (p = 11 only).
std::vector<QSeries> modular_basis(const PadicCtx& ctx, long p, i64 nmax);
int modular_dimension(long p);  // dim M_2(Gamma_0(p)) for the supported levels 5, 7, 11, 13

struct FitResult {
    std::vector<PadicScalar> coeffs;   // one per basis element
    PadicScalar a0;                    // inferred constant term
    std::vector<i64> solve_rows;       // indices n used for the square solve
    std::vector<i64> check_rows;       // remaining indices n >= 1
    std::vector<int> residual_valuations;  // per check row
    int min_residual_valuation = 0;
    int threshold = 0;
    bool certified = false;
    std::optional<i64> worst_row;      // first row attaining the minimum
    std::string report() const;
};

// Solve s = sum_j c_j basis_j on a square subsystem of rows n >= 1, then check all other rows n >= 1.
// a_0 of s is ignored (treated as unknown). Throws if fewer than `margin` check rows remain or if the
// subsystem is singular at working precision.
FitResult fit_to_basis(const QSeries& s, const std::vector<QSeries>& basis, int threshold, int margin = 10);

// log J_DR[tau] = 12 (p - 1) * (E_2 coefficient); also checks a_0 = (p - 1) * c within `tol` digits.
struct LogJDR {
    PadicScalar value;
    PadicScalar a0;           // (p-1) c = log(u_tau)
    bool a0_consistent = true;
};
LogJDR extract_logJDR(const FitResult& fit, long p, int tol);

}  // namespace rmlab
