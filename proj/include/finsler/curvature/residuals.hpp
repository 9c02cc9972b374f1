#pragma once

#include "finsler/curvature/tower.hpp"

namespace finsler::curvature {

template <class S>
struct FieldResiduals {
    S pw;    // left side of the vacuum equation
    S cs;    // pw - (2F/3) * average Ricci (non-vacuum form)
    S jterm; // g^{ij}{ dy_i(y^l delta_l J_j - N^l_j J_l) + J_{j|i} }
    S traced_ricci; // g^{ij} R_ij
};

// The mean-Landsberg block of both field equations, with the Chern
// horizontal covariant derivative J_{j|i} = delta_i J_j - Gamma^l_{ji} J_l.
template <class F>
typename F::S mean_landsberg_block(const F& fr, const FundamentalTensors<typename F::S>& t,
                                   const CurvatureTower<typename F::S>& c) {
    using S = typename F::S;
    const int n = fr.n();
    // A_j = y^l delta_l J_j - N^l_j J_l
    Vec<S> A(n, fr.constant(0));
    for (int j = 0; j < n; ++j) {
        S acc = fr.constant(0);
        for (int l = 0; l < n; ++l) {
            acc += fr.y()[l] * horizontal(fr, c.N, c.J[j], l);
            acc -= c.N[l][j] * c.J[l];
        }
        A[j] = acc;
    }
    S out = fr.constant(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S jcov = horizontal(fr, c.N, c.J[j], i);
            for (int l = 0; l < n; ++l) jcov -= c.Gamma_chern[l][j][i] * c.J[l];
            out += t.g_inv[i][j] * (fr.dy(A[j], i) + jcov);
        }
    return out;
}

// Residuals of the two Finslerian field equations at one frame (n = 4):
// pw = -2 Ric + (2F^2/3) g^{ij} R_ij + (2F^2/3) g^{ij}{...}, and the
// non-vacuum form cs = pw - (2F/3) R_avg with R_avg the indicatrix average
// of Ric (user-supplied constant or Monte-Carlo estimate).
template <class F>
FieldResiduals<typename F::S> field_residuals(const F& fr,
                                              const FundamentalTensors<typename F::S>& t,
                                              const CurvatureTower<typename F::S>& c,
                                              const typename F::S& r_avg) {
    using S = typename F::S;
    const int n = fr.n();
    if (n != 4) throw DimensionMismatch("the field equations are stated for n = 4");
    FieldResiduals<S> out{fr.constant(0), fr.constant(0), fr.constant(0), fr.constant(0)};
    out.jterm = mean_landsberg_block(fr, t, c);
    out.traced_ricci = fr.constant(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.traced_ricci += t.g_inv[i][j] * c.Ric_tensor[i][j];
    S two_thirds_F2 = fr.constant(2) * t.F2 / fr.constant(3);
    out.pw = -(fr.constant(2) * c.Ric) + two_thirds_F2 * out.traced_ricci +
             two_thirds_F2 * out.jterm;
    out.cs = out.pw - fr.constant(2) * t.F * r_avg / fr.constant(3);
    return out;
}

// Reduced residuals for a weakly Einstein ansatz Ric = (n-1)(3 theta F +
// K F^2): pw = 2 K F^2 - 3 theta F + (2F^2/3) g^{ij}{...}.
template <class F>
FieldResiduals<typename F::S> reduced_weak_einstein_residual(
    const F& fr, const FundamentalTensors<typename F::S>& t,
    const CurvatureTower<typename F::S>& c, const typename F::S& K,
    const Vec<typename F::S>& theta, const typename F::S& r_avg) {
    using S = typename F::S;
    const int n = fr.n();
    if (n != 4) throw DimensionMismatch("the reduced field equations are stated for n = 4");
    if (static_cast<int>(theta.size()) != n)
        throw DimensionMismatch("theta must have n components");
    FieldResiduals<S> out{fr.constant(0), fr.constant(0), fr.constant(0), fr.constant(0)};
    out.jterm = mean_landsberg_block(fr, t, c);
    S theta_y = fr.constant(0);
    for (int i = 0; i < n; ++i) theta_y += theta[i] * fr.y()[i];
    S two_thirds_F2 = fr.constant(2) * t.F2 / fr.constant(3);
    out.pw = fr.constant(2) * K * t.F2 - fr.constant(3) * theta_y * t.F +
             two_thirds_F2 * out.jterm;
    out.cs = out.pw - fr.constant(2) * t.F * r_avg / fr.constant(3);
    return out;
}

} // namespace finsler::curvature
