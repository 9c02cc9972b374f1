#pragma once

#include <cmath>

#include "finsler/geometry/linalg.hpp"
#include "finsler/geometry/metric_spec.hpp"

namespace finsler::geometry {

// Everything the metric alone determines at one evaluation frame, over
// either scalar backend.
template <class S>
struct FundamentalTensors {
    S F, F2, det_g, eta;
    Vec<S> ell, I, ylow, b_up;
    Mat<S> g, g_inv, h, a, alpha_inv;
    T3<S> C;
    // building blocks shared with the spray and curvature layers
    S beta, Qalpha, A, b2, md, det_alpha;
    S E0, W1, E2, Phipp, D1, PX;
    int sigma = +1;
};

namespace detail {

// The phi-family enters every closed-form formula only through a handful of
// alpha-rationalized combinations (A := sgn(alpha^2) alpha_ij y^i y^j,
// md := c A + r beta^2):
//   E0    = phi^2                    W1 = alpha phi phi'
//   E2    = phi phi'' + phi'^2       Phipp = phi phi''
//   D1    = (phi - s phi')^2         PX = (phi - s phi') phi''
// which are rational in y for the whole generalized m-Kropina family.
template <class F, class S>
void family_pieces(const F& fr, FundamentalTensors<S>& t) {
    const S& A = t.A;
    const S& beta = t.beta;
    const S& md = t.md;
    S c = fr.c_const(), r = fr.r_const();
    if (fr.family() == FamilyKind::PseudoRiemannian) {
        t.F2 = md;
        t.F = fr.sign_branch() > 0 ? fr.sqrt_md(md) : -fr.sqrt_md(md);
        t.E0 = md / A;
        t.W1 = r * beta;
        t.E2 = r;
        t.Phipp = r * c * A / md;
        t.D1 = c * c * A / md;
        t.PX = r * c * c * A * A / (md * md);
        t.eta = fr.constant(1);
        return;
    }
    const double m = fr.m_d();
    S ms = fr.m_const();
    S rb2 = r * beta * beta;       // r beta^2
    S cmA = c * ms * A;            // c m A
    S cm1 = c * (ms + fr.constant(1)); // c (m+1)
    t.F2 = fr.pow_param(md, m + 1) / fr.pow_param(beta, 2 * m);
    double ip;
    if (std::modf(m, &ip) == 0.0) {
        const long mi = static_cast<long>(ip);
        S bpm = fr.pow_param(beta, m);
        S core = (mi % 2 == 0)
                     ? fr.pow_param(md, static_cast<double>(mi / 2)) * fr.sqrt_md(md)
                     : fr.pow_param(md, static_cast<double>((mi + 1) / 2));
        t.F = fr.sign_branch() > 0 ? core / bpm : -(core / bpm);
    } else {
        S core = fr.pow_param(md, (1 + m) / 2);
        S bpm = fr.pow_param(beta, m);
        t.F = fr.sign_branch() > 0 ? core / bpm : -(core / bpm);
    }
    t.E0 = t.F2 / A;
    t.W1 = (rb2 - cmA) * fr.pow_param(md, m) / fr.pow_param(beta, 2 * m + 1);
    S mdm1 = fr.pow_param(md, m - 1);
    S bp2m2 = fr.pow_param(beta, 2 * m + 2);
    t.E2 = mdm1 * (cm1 * (cmA + rb2) * A + (rb2 - cmA) * (rb2 - cmA)) / bp2m2;
    t.Phipp = cm1 * (cmA + rb2) * mdm1 * A / bp2m2;
    t.D1 = cm1 * cm1 * A * mdm1 / fr.pow_param(beta, 2 * m);
    t.PX = cm1 * cm1 * (cmA + rb2) * fr.pow_param(md, m - 2) * A * A / bp2m2;
    t.eta = fr.pow_param(md, m) / fr.pow_param(beta, 2 * m);
}

// The paper's AR factor a_ij, computed independently of g.
template <class F, class S>
Mat<S> ar_factor(const F& fr, const FundamentalTensors<S>& t) {
    const int n = fr.n();
    S sg = fr.constant(fr.sigma());
    Mat<S> a = make_mat(n, fr.constant(0));
    if (fr.family() == FamilyKind::PseudoRiemannian) {
        S c = fr.c_const(), r = fr.r_const();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a[i][j] = sg * c * fr.alpha()[i][j] + r * fr.b()[i] * fr.b()[j];
        return a;
    }
    S c = fr.c_const(), r = fr.r_const(), ms = fr.m_const();
    S one = fr.constant(1), two = fr.constant(2);
    const S &A = t.A, &beta = t.beta, &md = t.md;
    S b2t = beta * beta;
    // (c^2 m (2m+1) A^2 - c r (m-1) beta^2 A + r^2 beta^4) / (beta^2 md)
    S kbb = (c * c * ms * (two * ms + one) * A * A -
             c * r * (ms - one) * b2t * A + r * r * b2t * b2t) /
            (b2t * md);
    S kby = two * c * c * ms * (ms + one) * A / (beta * md);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S mixed = sg * (fr.b()[i] * t.ylow[j] + fr.b()[j] * t.ylow[i]) -
                      (beta / A) * t.ylow[i] * t.ylow[j];
            a[i][j] = c * (ms + one) * sg * fr.alpha()[i][j] +
                      kbb * fr.b()[i] * fr.b()[j] - kby * mixed;
        }
    return a;
}

} // namespace detail

// Builds F, g_ij (two independent routes, asserted equal), determinant (two
// routes), inverse, angular metric, support element, Cartan and mean Cartan
// tensors, and the AR decomposition eta * a_ij.
template <class F>
FundamentalTensors<typename F::S> fundamental_tensors(const F& fr) {
    using S = typename F::S;
    const int n = fr.n();
    FundamentalTensors<S> t;
    t.sigma = fr.sigma();

    // scalars of the (alpha, beta) data
    t.beta = fr.constant(0);
    t.Qalpha = fr.constant(0);
    for (int i = 0; i < n; ++i) {
        t.beta += fr.b()[i] * fr.y()[i];
        for (int j = 0; j < n; ++j) t.Qalpha += fr.alpha()[i][j] * fr.y()[i] * fr.y()[j];
    }
    t.A = fr.sigma() > 0 ? t.Qalpha : -t.Qalpha;
    t.det_alpha = ring_det(fr.alpha());
    fr.check_den("det(alpha)", t.det_alpha);
    t.alpha_inv = ring_inverse(fr.alpha(), t.det_alpha);
    t.ylow.assign(n, fr.constant(0));
    t.b_up.assign(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            t.ylow[i] += fr.alpha()[i][j] * fr.y()[j];
            t.b_up[i] += t.alpha_inv[i][j] * fr.b()[j];
        }
    t.b2 = fr.constant(0);
    for (int i = 0; i < n; ++i) t.b2 += t.b_up[i] * fr.b()[i];
    t.md = fr.c_const() * t.A + fr.r_const() * t.beta * t.beta;

    detail::family_pieces(fr, t);

    // metric tensor, closed form
    S sg = fr.constant(fr.sigma());
    S P1 = t.E0 - t.beta * t.W1 / t.A;
    S P3 = t.W1 / t.A - t.beta * t.E2 / t.A;
    t.g = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t.g[i][j] = sg * P1 * fr.alpha()[i][j] + t.E2 * fr.b()[i] * fr.b()[j] +
                        P3 * (sg * (fr.b()[i] * t.ylow[j] + fr.b()[j] * t.ylow[i]) -
                              (t.beta / t.A) * t.ylow[i] * t.ylow[j]);

    // metric tensor, derivative route: g_ij = 1/2 dy_i dy_j F^2
    for (int i = 0; i < n; ++i) {
        S dF2 = fr.dy(t.F2, i);
        for (int j = i; j < n; ++j) {
            S direct = fr.dy(dF2, j) / fr.constant(2);
            fr.assert_close(t.g[i][j], direct, "g_ij closed form vs (1/2) dydy F^2");
        }
    }

    // determinant, direct and via the phi-product formula. In the third
    // factor sgn(alpha^2) multiplies b^2 alone: phi - s phi' +
    // (sgn(alpha^2) b^2 - s^2) phi''. That kernel follows from the matrix
    // determinant lemma applied to the validated closed-form g and is what
    // the direct determinant confirms on both signature cones.
    t.det_g = ring_det(t.g);
    if (fr.is_zero(t.det_g)) throw DegenerateMetric("det(g) vanishes at this frame");
    S kernel_arg = sg * t.b2 - t.beta * t.beta / t.A;
    S phiX = t.E0 - t.beta * t.W1 / t.A + kernel_arg * t.Phipp;
    S det_formula = fr.constant(1);
    if (n % 2 == 0) {
        for (int k = 0; k < n / 2; ++k) det_formula *= t.E0;
        for (int k = 0; k < (n - 2) / 2; ++k) det_formula *= t.D1;
        det_formula *= phiX;
    } else {
        for (int k = 0; k < (n + 1) / 2; ++k) det_formula *= t.E0;
        for (int k = 0; k < (n - 3) / 2; ++k) det_formula *= t.D1;
        det_formula *= t.D1 + kernel_arg * t.PX;
    }
    det_formula *= t.det_alpha;
    fr.assert_close(t.det_g, det_formula, "det(g) vs phi-product formula");

    t.g_inv = ring_inverse(t.g, t.det_g);

    // support element and angular metric, with the F dydy F identity
    t.ell.assign(n, fr.constant(0));
    for (int i = 0; i < n; ++i) t.ell[i] = fr.dy(t.F, i);
    t.h = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            t.h[i][j] = t.g[i][j] - t.ell[i] * t.ell[j];
            if (j >= i)
                fr.assert_close(t.h[i][j], t.F * fr.dy(fr.dy(t.F, i), j),
                                "h_ij = g - ll vs F dydy F");
        }

    // Cartan tensor and mean Cartan
    t.C = make_t3(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) t.C[i][j][k] = fr.dy(t.g[i][j], k) / fr.constant(2);
    t.I.assign(n, fr.constant(0));
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) t.I[l] += t.g_inv[j][k] * t.C[l][j][k];

    // AR decomposition g = eta * a with a_ij rational in y
    t.a = detail::ar_factor(fr, t);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            fr.assert_close(t.g[i][j], t.eta * t.a[i][j], "g_ij vs eta * a_ij");

    // homogeneity contractions
    for (int i = 0; i < n; ++i) {
        S hy = fr.constant(0);
        for (int k = 0; k < n; ++k) hy += t.h[i][k] * fr.y()[k];
        fr.assert_zero(hy, t.F2, "h_ij y^j = 0");
        for (int j = i; j < n; ++j) {
            S cy = fr.constant(0);
            for (int k = 0; k < n; ++k) cy += t.C[i][j][k] * fr.y()[k];
            fr.assert_zero(cy, t.F2, "C_ijk y^k = 0");
        }
    }

    return t;
}

} // namespace finsler::geometry
