#pragma once

#include "finsler/curvature/tower.hpp"

namespace finsler::curvature {

// S-curvature for a volume density sigma: N^i_i - y^i dx_i log(sigma).
// The caller supplies the log-density gradient in the frame's scalar type
// (numeric: from a positive sigma closure; exact: polynomial data).
template <class F, class S>
S s_curvature(const F& fr, const Mat<S>& N, const Vec<S>& dlog_sigma) {
    const int n = fr.n();
    if (static_cast<int>(dlog_sigma.size()) != n)
        throw DimensionMismatch("log-density gradient has wrong size");
    S acc = fr.constant(0);
    for (int i = 0; i < n; ++i) acc += N[i][i];
    for (int i = 0; i < n; ++i) acc -= fr.y()[i] * dlog_sigma[i];
    return acc;
}

// Lightweight Ricci scalar (spray trace route only), for bulk sweeps that
// do not need the whole tower.
template <class F>
typename F::S ricci_scalar(const F& fr, const SprayData<typename F::S>& sp) {
    using S = typename F::S;
    const int n = fr.n();
    Mat<S> N = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) N[i][j] = fr.dy(sp.G[i], j);
    S acc = fr.constant(0);
    for (int i = 0; i < n; ++i) {
        acc += fr.constant(2) * fr.dx(sp.G[i], i);
        for (int j = 0; j < n; ++j) {
            acc -= fr.y()[j] * fr.dx(N[i][i], j);
            acc += fr.constant(2) * sp.G[j] * fr.dy(N[i][j], i);
            acc -= N[i][j] * N[j][i];
        }
    }
    return acc;
}

// Flag curvature of the flag (span{y,u}, y).
template <class F>
typename F::S flag_curvature(const F& fr, const FundamentalTensors<typename F::S>& t,
                             const Mat<typename F::S>& R_riem,
                             const Vec<typename F::S>& u) {
    using S = typename F::S;
    const int n = fr.n();
    if (static_cast<int>(u.size()) != n) throw DimensionMismatch("flag pole has wrong size");
    S num = fr.constant(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) num += t.g[i][j] * R_riem[i][k] * u[j] * u[k];
    S guu = fr.constant(0), gyu = fr.constant(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            guu += t.g[i][j] * u[i] * u[j];
            gyu += t.g[i][j] * fr.y()[i] * u[j];
        }
    S den = t.F2 * guu - gyu * gyu;
    if (fr.is_zero(den))
        throw DegenerateFlag("flag denominator vanishes: u is parallel to y in the g-sense");
    return num / den;
}

} // namespace finsler::curvature
