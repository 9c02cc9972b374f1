#pragma once

#include <string>
#include <vector>

#include "finsler/backend/exact.hpp"
#include "finsler/curvature/residuals.hpp"
#include "finsler/curvature/scalars.hpp"

namespace finsler::classify {

using backend::ExactFrame;
using geometry::MetricSpec;
using ratfun::Certificate;

struct RationalityRow {
    std::string object;
    long m_tested = 0;
    Certificate certificate = Certificate::Rational;
    std::string expected_condition; // condition on m from the summary table
    bool expected_rational = false; // that condition specialized to m_tested
    bool matches() const {
        return (certificate == Certificate::Rational) == expected_rational;
    }
};

namespace detail {

inline void fold(Certificate& acc, const backend::XJet& s) {
    if (s.value().is_rational() == Certificate::Irrational) acc = Certificate::Irrational;
}

} // namespace detail

// Computes the rationality certificate of every object in the paper's
// summary table from canonical extension-scalar forms at one rational chart
// point. Only integer m admits the exact backend, so the "m in R" rows are
// certified on their integer instances.
inline std::vector<RationalityRow> rationality_table(const MetricSpec& spec,
                                                     const std::vector<Rational>& at_x,
                                                     int sigma = +1) {
    using curvature::curvature_tower;
    using curvature::spray;
    using geometry::fundamental_tensors;
    if (spec.family.kind == geometry::FamilyKind::PseudoRiemannian)
        throw ExactBackendUnavailable("the rationality table is about the m-family");
    ExactFrame fr(spec, at_x, sigma);
    const long m = spec.family.m_eff().as_integer();
    const bool is_odd = (m % 2) != 0;
    const int n = fr.n();

    auto ft = fundamental_tensors(fr);
    auto sp = spray(fr, ft);
    auto tw = curvature_tower(fr, ft, sp);

    std::vector<RationalityRow> rows;
    auto push = [&](std::string name, Certificate cert, std::string cond, bool expect) {
        rows.push_back({std::move(name), m, cert, std::move(cond), expect});
    };

    push("F", ft.F.value().is_rational(), "m odd integer", is_odd);

    Certificate cg = Certificate::Rational;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) detail::fold(cg, ft.g[i][j]);
    push("g_ij", cg, "m in Z", true);
    push("eta", ft.eta.value().is_rational(), "m in Z", true);

    Certificate cc = Certificate::Rational;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) detail::fold(cc, ft.C[i][j][k]);
    push("C_ijk", cc, "m in Z", true);

    Certificate ci = Certificate::Rational;
    for (int i = 0; i < n; ++i) detail::fold(ci, ft.I[i]);
    push("I_i", ci, "m in R", true);

    Certificate cdl = Certificate::Rational;
    for (int i = 0; i < n; ++i) {
        detail::fold(cdl, fr.dy(ft.eta, i) / ft.eta);
        detail::fold(cdl, fr.dx(ft.eta, i) / ft.eta);
    }
    push("dlog(eta)", cdl, "m in R", true);

    Certificate ch = Certificate::Rational;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) detail::fold(ch, ft.h[i][j]);
    push("h_ij", ch, "m in Z", true);

    Certificate cl = Certificate::Rational;
    for (int i = 0; i < n; ++i) detail::fold(cl, ft.ell[i]);
    push("l_i", cl, "m odd integer", is_odd);

    Certificate cspray = Certificate::Rational;
    for (int i = 0; i < n; ++i) {
        detail::fold(cspray, sp.G[i]);
        for (int j = 0; j < n; ++j) {
            detail::fold(cspray, tw.N[i][j]);
            for (int k = 0; k < n; ++k) {
                detail::fold(cspray, tw.Gamma[i][j][k]);
                for (int l = 0; l < n; ++l) detail::fold(cspray, tw.B[i][j][k][l]);
            }
        }
    }
    push("G^i, N^i_j, G^i_jk, G^i_jkl", cspray, "m in R", true);

    Certificate cmean = Certificate::Rational;
    for (int i = 0; i < n; ++i) {
        detail::fold(cmean, tw.J[i]);
        for (int j = 0; j < n; ++j) {
            detail::fold(cmean, tw.E[i][j]);
            detail::fold(cmean, tw.H[i][j]);
        }
    }
    push("E_ij, H_ij, J_i", cmean, "m in R", true);

    Certificate cric = Certificate::Rational;
    detail::fold(cric, tw.Ric);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            detail::fold(cric, tw.R_riem[i][j]);
            detail::fold(cric, tw.Ric_tensor[i][j]);
            for (int k = 0; k < n; ++k) detail::fold(cric, tw.R_barthel[i][j][k]);
        }
    // S-curvature with constant density: the N^i_i part
    {
        geometry::Vec<backend::XJet> dlog(n, fr.constant(0));
        detail::fold(cric, curvature::s_curvature(fr, tw.N, dlog));
    }
    push("R^i_j, Ric, S-curvature", cric, "m in R", true);

    // flag curvature with a fixed rational pole
    {
        geometry::Vec<backend::XJet> u(n, fr.constant(0));
        u[n - 1] = fr.constant(1);
        u[0] = fr.constant(rat(1, 3));
        Certificate ck = Certificate::Rational;
        detail::fold(ck, curvature::flag_curvature(fr, ft, tw.R_riem, u));
        push("flag curvature K", ck, "m in Z", true);
    }

    Certificate cland = Certificate::Rational;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) detail::fold(cland, tw.L[i][j][k]);
    push("L_ijk", cland, "m in Z", true);

    return rows;
}

} // namespace finsler::classify
