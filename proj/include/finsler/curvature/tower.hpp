#pragma once

#include "finsler/curvature/spray.hpp"

namespace finsler::curvature {

template <class S>
struct CurvatureTower {
    Mat<S> N;          // Barthel connection N^i_j = dy_j G^i
    T3<S> Gamma;       // Berwald connection G^i_{jk}
    T3<S> Gamma_chern; // Chern horizontal coefficients
    T4<S> B;           // Berwald curvature G^i_{jkl}
    Mat<S> E;          // mean Berwald curvature
    T3<S> L;           // Landsberg curvature
    Vec<S> J;          // mean Landsberg curvature
    T3<S> R_barthel;   // R^i_{jk} of the Barthel connection
    Mat<S> R_riem;     // Riemann-type curvature R^i_k
    S Ric;             // Ricci scalar
    Mat<S> Ric_tensor; // R_ij = 1/2 dy_i dy_j Ric
    Mat<S> H;          // H_ij = y^l E_{ij||l}
};

// delta_i X = dx_i X - N^m_i dy_m X (horizontal derivative, shared by the
// Barthel curvature, the H-curvature and the Chern terms)
template <class F, class S>
S horizontal(const F& fr, const Mat<S>& N, const S& X, int i) {
    S acc = fr.dx(X, i);
    for (int m = 0; m < fr.n(); ++m) acc -= N[m][i] * fr.dy(X, m);
    return acc;
}

template <class F>
CurvatureTower<typename F::S> curvature_tower(const F& fr,
                                              const FundamentalTensors<typename F::S>& t,
                                              const SprayData<typename F::S>& sp) {
    using S = typename F::S;
    const int n = fr.n();
    CurvatureTower<S> c;

    c.N = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.N[i][j] = fr.dy(sp.G[i], j);

    c.Gamma = make_t3(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                c.Gamma[i][j][k] = fr.dy(c.N[i][j], k);
                c.Gamma[i][k][j] = c.Gamma[i][j][k];
            }

    c.B = make_t4(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k)
                for (int l = k; l < n; ++l) {
                    S v = fr.dy(c.Gamma[i][j][k], l);
                    c.B[i][j][k][l] = v;
                    c.B[i][j][l][k] = v;
                    c.B[i][k][j][l] = v;
                    c.B[i][k][l][j] = v;
                    c.B[i][l][j][k] = v;
                    c.B[i][l][k][j] = v;
                }

    // B^l_{ijk} y^k = 0 (one y-derivative above homogeneity degree)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S by = fr.constant(0);
            for (int k = 0; k < n; ++k) by += c.B[i][0][j][k] * fr.y()[k];
            fr.assert_zero(by, c.N[i][j], "B^i_{0jk} y^k = 0");
        }

    c.E = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S acc = fr.constant(0);
            for (int k = 0; k < n; ++k) acc += c.B[k][k][i][j];
            c.E[i][j] = acc / fr.constant(2);
        }

    // Riemann-type curvature of the spray
    Mat<S> dxG = make_mat(n, fr.constant(0)); // dxG[i][k] = dx_k G^i
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) dxG[i][k] = fr.dx(sp.G[i], k);
    T3<S> dxN = make_t3(n, fr.constant(0)); // dxN[i][k][j] = dx_j N^i_k
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) dxN[i][k][j] = fr.dx(c.N[i][k], j);

    c.R_riem = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            S acc = fr.constant(2) * dxG[i][k];
            for (int j = 0; j < n; ++j) {
                acc -= fr.y()[j] * dxN[i][k][j];
                acc += fr.constant(2) * sp.G[j] * c.Gamma[i][j][k];
                acc -= c.N[i][j] * c.N[j][k];
            }
            c.R_riem[i][k] = acc;
        }

    c.Ric = fr.constant(0);
    for (int i = 0; i < n; ++i) c.Ric += c.R_riem[i][i];

    c.Ric_tensor = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            c.Ric_tensor[i][j] = fr.dy(fr.dy(c.Ric, i), j) / fr.constant(2);
            c.Ric_tensor[j][i] = c.Ric_tensor[i][j];
        }
    // Ric = R_ij y^i y^j closes the loop between the two routes
    {
        S ryy = fr.constant(0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ryy += c.Ric_tensor[i][j] * fr.y()[i] * fr.y()[j];
        fr.assert_close(ryy, c.Ric, "Ric = R_ij y^i y^j");
    }

    // Barthel connection curvature R^i_{jk} = delta_k N^i_j - delta_j N^i_k,
    // expanded through delta_i = dx_i - N^m_i dy_m. The horizontal
    // contraction y^j R^i_{jk} = R^i_k is asserted below.
    c.R_barthel = make_t3(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                S acc = dxN[i][j][k] - dxN[i][k][j];
                for (int r = 0; r < n; ++r)
                    acc += c.N[r][j] * c.Gamma[i][r][k] - c.N[r][k] * c.Gamma[i][r][j];
                c.R_barthel[i][j][k] = acc;
            }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            S contracted = fr.constant(0);
            for (int j = 0; j < n; ++j) contracted += fr.y()[j] * c.R_barthel[i][j][k];
            fr.assert_close(contracted, c.R_riem[i][k], "y^j R^i_{jk} = R^i_k");
        }

    // Landsberg curvature and mean Landsberg, two routes
    Vec<S> ylow_g(n, fr.constant(0)); // g_{rl} y^r
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r) ylow_g[l] += t.g[r][l] * fr.y()[r];
    c.L = make_t3(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                S acc = fr.constant(0);
                for (int l = 0; l < n; ++l) acc += ylow_g[l] * c.B[l][i][j][k];
                acc = -(acc / fr.constant(4));
                c.L[i][j][k] = acc;
                c.L[i][k][j] = acc;
                c.L[j][i][k] = acc;
                c.L[j][k][i] = acc;
                c.L[k][i][j] = acc;
                c.L[k][j][i] = acc;
            }

    // J_k via the mean Cartan transport along the spray (full jet orders).
    // With the L = -(1/4) y.g.B normalization the transport carries a 1/2:
    // J_k = (1/2)(y^p dx_p I_k - 2 G^p dy_p I_k - N^p_k I_p).
    c.J.assign(n, fr.constant(0));
    for (int k = 0; k < n; ++k) {
        S acc = fr.constant(0);
        for (int p = 0; p < n; ++p) {
            acc += fr.y()[p] * fr.dx(t.I[k], p);
            acc -= fr.constant(2) * sp.G[p] * fr.dy(t.I[k], p);
            acc -= c.N[p][k] * t.I[p];
        }
        c.J[k] = acc / fr.constant(2);
    }
    // ... cross-checked against the defining contraction g^{ij} L_ijk
    for (int k = 0; k < n; ++k) {
        S jg = fr.constant(0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) jg += t.g_inv[i][j] * c.L[i][j][k];
        fr.assert_close(c.J[k], jg, "J_k: mean Cartan transport vs g^{ij} L_ijk");
    }

    // Chern horizontal coefficients
    T3<S> dg = make_t3(n, fr.constant(0)); // dg[l][k][j] = delta_j g_lk
    for (int l = 0; l < n; ++l)
        for (int k = l; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                dg[l][k][j] = horizontal(fr, c.N, t.g[l][k], j);
                dg[k][l][j] = dg[l][k][j];
            }
    c.Gamma_chern = make_t3(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                S acc = fr.constant(0);
                for (int l = 0; l < n; ++l)
                    acc += t.g_inv[i][l] * (dg[l][k][j] + dg[j][l][k] - dg[j][k][l]);
                acc = acc / fr.constant(2);
                c.Gamma_chern[i][j][k] = acc;
                c.Gamma_chern[i][k][j] = acc;
            }

    // H_ij = y^l (delta_l E_ij - G^k_{il} E_kj - G^k_{jl} E_ki)
    c.H = make_mat(n, fr.constant(0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            S acc = fr.constant(0);
            for (int l = 0; l < n; ++l) {
                S term = fr.dx(c.E[i][j], l);
                for (int k = 0; k < n; ++k) {
                    term -= c.N[k][l] * fr.dy(c.E[i][j], k);
                    term -= c.Gamma[k][i][l] * c.E[k][j];
                    term -= c.Gamma[k][j][l] * c.E[k][i];
                }
                acc += fr.y()[l] * term;
            }
            c.H[i][j] = acc;
            c.H[j][i] = acc;
        }

    return c;
}

} // namespace finsler::curvature
