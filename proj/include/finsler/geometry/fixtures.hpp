#pragma once

#include <vector>

#include "finsler/geometry/metric_spec.hpp"

namespace finsler::geometry {

namespace fixture_detail {

inline CoeffField czero(int n) { return CoeffField(MultiPoly::constant(n, n, rat(0))); }
inline CoeffField cconst(int n, const Rational& v) {
    return CoeffField(MultiPoly::constant(n, n, v));
}

} // namespace fixture_detail

// Flat anisotropic spacetime: Minkowski alpha = diag(-1,1,1,1) with a
// constant 1-form. With b nowhere null this is Ricci-flat of Berwald type
// and solves the vacuum field equation.
inline MetricSpec example1_flat_anisotropic(const Param& m,
                                            std::vector<Rational> cvec = {rat(1), rat(2),
                                                                          rat(0), rat(0)},
                                            const Param& c = Param{1L},
                                            const Param& r = Param{0L}) {
    using namespace fixture_detail;
    const int n = 4;
    MetricSpec s;
    s.n = n;
    s.family.kind = (r.d == 0.0 && c.d == 1.0) ? FamilyKind::MKropina
                                               : FamilyKind::GeneralizedMKropina;
    s.family.m = m;
    s.family.c = c;
    s.family.r = r;
    s.alpha.assign(n * n, czero(n));
    s.a(0, 0) = cconst(n, rat(-1));
    for (int i = 1; i < n; ++i) s.a(i, i) = cconst(n, rat(1));
    for (int i = 0; i < n; ++i) s.beta.push_back(cconst(n, cvec[i]));
    s.name = "example1-flat-anisotropic";
    return s;
}

// Finsler VSI spacetime in coordinates (u, v, x, y):
// alpha = -2 du dv + ((3m-1-m^2)/(12(m-1)^2) x^4 + y^4/12 + x v) du^2
//         + 2 x y du dy + dx^2 + dy^2,  beta = du (null).
// Ricci-flat m-Kropina of Berwald type for m != -1, 0, 1.
inline MetricSpec example2_vsi(const Param& m) {
    using namespace fixture_detail;
    const int n = 4;
    if (!m.q) throw ConfigError("the VSI fixture needs a rational m");
    const Rational mq = *m.q;
    if (mq == 1 || mq == 0 || mq == -1)
        throw ConfigError("the VSI fixture needs m outside {-1, 0, 1}");
    MetricSpec s;
    s.n = n;
    s.family.kind = FamilyKind::MKropina;
    s.family.m = m;
    s.alpha.assign(n * n, czero(n));
    MultiPoly v = MultiPoly::variable(n, n, 1);
    MultiPoly x = MultiPoly::variable(n, n, 2);
    MultiPoly y = MultiPoly::variable(n, n, 3);
    Rational q = (3 * mq - 1 - mq * mq) / (12 * (mq - 1) * (mq - 1));
    MultiPoly w11 = x.pow(4) * q + y.pow(4) * rat(1, 12) + x * v;
    s.a(0, 0) = CoeffField(w11);
    s.a(0, 1) = cconst(n, rat(-1));
    s.a(1, 0) = cconst(n, rat(-1));
    s.a(0, 3) = CoeffField(x * y);
    s.a(3, 0) = CoeffField(x * y);
    s.a(2, 2) = cconst(n, rat(1));
    s.a(3, 3) = cconst(n, rat(1));
    s.beta = {cconst(n, rat(1)), czero(n), czero(n), czero(n)};
    s.name = "example2-vsi";
    return s;
}

// Finsler pp-wave in coordinates (u, v, x, y): alpha = -2 du dv +
// (x^4 - 6 x^2 y^2 + y^4) du^2 + dx^2 + dy^2 with the harmonic quartic
// profile, beta = du parallel and null. A classical vacuum pp-wave (VSI
// class), so the m-Kropina metric is Berwald with G = G_alpha, exactly
// Ricci-flat, and an exact solution of the vacuum field equation.
inline MetricSpec example2_ppwave(const Param& m) {
    using namespace fixture_detail;
    const int n = 4;
    MetricSpec s;
    s.n = n;
    s.family.kind = FamilyKind::MKropina;
    s.family.m = m;
    s.alpha.assign(n * n, czero(n));
    MultiPoly x = MultiPoly::variable(n, n, 2);
    MultiPoly y = MultiPoly::variable(n, n, 3);
    s.a(0, 0) = CoeffField(x.pow(4) - MultiPoly::constant(n, n, rat(6)) * x.pow(2) * y.pow(2) +
                           y.pow(4));
    s.a(0, 1) = cconst(n, rat(-1));
    s.a(1, 0) = cconst(n, rat(-1));
    s.a(2, 2) = cconst(n, rat(1));
    s.a(3, 3) = cconst(n, rat(1));
    s.beta = {cconst(n, rat(1)), czero(n), czero(n), czero(n)};
    s.name = "example2-ppwave";
    return s;
}

// Cosmological fixture in coordinates (t, x, y, z):
// F = |dt^2 - A(t)^2 (dx^2+dy^2+dz^2)|^((m+1)/2) (c A(t)^(1/m) dt)^(-m).
// With A(t) = t^p and p divisible by m every coefficient is polynomial, so
// the exact backend applies; the generic A(t) = t instantiation is numeric.
inline MetricSpec example3_cosmological_exact(const Param& m, const Rational& c, long p) {
    using namespace fixture_detail;
    const int n = 4;
    if (!m.is_integer() || p % m.as_integer() != 0)
        throw ConfigError("polynomial cosmological fixture needs p divisible by m");
    MetricSpec s;
    s.n = n;
    s.family.kind = FamilyKind::MKropina;
    s.family.m = m;
    MultiPoly t = MultiPoly::variable(n, n, 0);
    s.alpha.assign(n * n, czero(n));
    s.a(0, 0) = cconst(n, rat(1));
    for (int i = 1; i < n; ++i)
        s.a(i, i) = CoeffField(-(t.pow(static_cast<unsigned>(2 * p))));
    s.beta = {CoeffField(t.pow(static_cast<unsigned>(p / m.as_integer())) * c), czero(n),
              czero(n), czero(n)};
    s.name = "example3-cosmological";
    return s;
}

// Numeric variant with arbitrary smooth scale factor A(t) (default t).
inline MetricSpec example3_cosmological_numeric(const Param& m, double c) {
    using namespace fixture_detail;
    const int n = 4;
    MetricSpec s;
    s.n = n;
    s.family.kind = FamilyKind::MKropina;
    s.family.m = m;
    const double minv = 1.0 / m.d;
    auto A = [](const Jet& t) { return t; }; // A(t) = t
    s.alpha.assign(n * n, czero(n));
    s.a(0, 0) = cconst(n, rat(1));
    for (int i = 1; i < n; ++i)
        s.a(i, i) = CoeffField([A](const std::vector<Jet>& x) {
            Jet a = A(x[0]);
            return -(a * a);
        });
    s.beta.push_back(CoeffField([A, c, minv](const std::vector<Jet>& x) {
        return A(x[0]).pow(minv) * c;
    }));
    for (int i = 1; i < n; ++i) s.beta.push_back(czero(n));
    s.name = "example3-cosmological";
    return s;
}

// n = 2 chart with genuine x-dependence and a non-parallel 1-form:
// alpha = diag(1 + (x2)^2, 1), b = (1, x1). Exercises every term of the
// spray split; the default fixture for rationality certificates.
inline MetricSpec euclidean_poly_fixture(const Family& fam) {
    using namespace fixture_detail;
    const int n = 2;
    MetricSpec s;
    s.n = n;
    s.family = fam;
    MultiPoly one = MultiPoly::constant(n, n, rat(1));
    MultiPoly x1 = MultiPoly::variable(n, n, 0), x2 = MultiPoly::variable(n, n, 1);
    s.alpha = {CoeffField(one + x2 * x2), czero(n), czero(n), CoeffField(one)};
    s.beta = {CoeffField(one), CoeffField(x1)};
    s.name = "euclidean-fixture";
    return s;
}

// Minkowski variant of the polynomial fixture (Lorentzian alpha).
inline MetricSpec minkowski_poly_fixture(const Family& fam) {
    using namespace fixture_detail;
    const int n = 2;
    MetricSpec s;
    s.n = n;
    s.family = fam;
    MultiPoly one = MultiPoly::constant(n, n, rat(1));
    MultiPoly x1 = MultiPoly::variable(n, n, 0), x2 = MultiPoly::variable(n, n, 1);
    s.alpha = {CoeffField(-(one + x2 * x2)), czero(n), czero(n), CoeffField(one)};
    s.beta = {CoeffField(one), CoeffField(x1)};
    s.name = "minkowski-fixture";
    return s;
}

// Unit round sphere S^(n-1+1)... stereographic chart of the unit n-sphere:
// alpha_ij = 4 delta_ij / (1 + |x|^2)^2, constant flag curvature 1 under
// the pseudo-riemannian family.
inline MetricSpec round_sphere(int n) {
    using namespace fixture_detail;
    MetricSpec s;
    s.n = n;
    s.family.kind = FamilyKind::PseudoRiemannian;
    s.family.c = Param{1L};
    s.family.r = Param{0L};
    s.alpha.assign(n * n, czero(n));
    for (int i = 0; i < n; ++i)
        s.a(i, i) = CoeffField([n](const std::vector<Jet>& x) {
            Jet q = Jet::constant(n, 1.0);
            for (const auto& xi : x) q += xi * xi;
            return 4.0 / (q * q);
        });
    s.beta.assign(n, czero(n));
    s.beta[0] = cconst(n, rat(1));
    s.name = "round-sphere";
    return s;
}

// Product S^3 x R in coordinates (x1,x2,x3,t): Ricci tensor 2*g on the
// sphere block, 0 on the line. The non-Ricci-flat reduction fixture.
inline MetricSpec sphere_product_fixture() {
    using namespace fixture_detail;
    const int n = 4;
    MetricSpec s;
    s.n = n;
    s.family.kind = FamilyKind::PseudoRiemannian;
    s.family.c = Param{1L};
    s.family.r = Param{0L};
    s.alpha.assign(n * n, czero(n));
    for (int i = 0; i < 3; ++i)
        s.a(i, i) = CoeffField([](const std::vector<Jet>& x) {
            Jet q = Jet::constant(4, 1.0) + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            return 4.0 / (q * q);
        });
    s.a(3, 3) = cconst(n, rat(1));
    s.beta.assign(n, czero(n));
    s.beta[0] = cconst(n, rat(1));
    s.name = "sphere-product";
    return s;
}

} // namespace finsler::geometry
