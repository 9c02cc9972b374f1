#include "catch_amalgamated.hpp"

#include <cmath>

#include "finsler/backend/exact.hpp"
#include "finsler/backend/numeric.hpp"
#include "finsler/geometry/tensors.hpp"

using namespace finsler;
using namespace finsler::geometry;
using backend::ExactFrame;
using backend::NumericFrame;
using autodiff::EvalPoint;
using ratfun::Certificate;
using ratfun::MultiPoly;

namespace {

CoeffField cpoly(int n, const Rational& v) {
    return CoeffField(MultiPoly::constant(n, n, v));
}
CoeffField xpoly(const MultiPoly& p) { return CoeffField(p); }

// flat diagonal alpha with constant entries, plus a constant 1-form
MetricSpec flat_spec(int n, std::vector<long> diag, std::vector<long> bvals, Family fam) {
    MetricSpec s;
    s.n = n;
    s.family = fam;
    s.alpha.assign(n * n, cpoly(n, rat(0)));
    for (int i = 0; i < n; ++i) s.a(i, i) = cpoly(n, rat(diag[i]));
    for (long v : bvals) s.beta.push_back(cpoly(n, rat(v)));
    return s;
}

// n = 2 fixture with genuine x-dependence and a non-parallel 1-form:
// alpha = diag(1 + (x2)^2, 1), b = (1, x1)
MetricSpec curved_spec(Family fam) {
    const int n = 2;
    MetricSpec s;
    s.n = n;
    s.family = fam;
    MultiPoly one = MultiPoly::constant(n, n, rat(1));
    MultiPoly x1 = MultiPoly::variable(n, n, 0), x2 = MultiPoly::variable(n, n, 1);
    s.alpha = {xpoly(one + x2 * x2), cpoly(n, rat(0)), cpoly(n, rat(0)), xpoly(one)};
    s.beta = {xpoly(one), xpoly(x1)};
    s.name = "euclidean-poly";
    return s;
}

bool close(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

TEST_CASE("Kropina on Euclidean R^2 reproduces F = alpha^2/beta") {
    Family fam;
    fam.kind = FamilyKind::Kropina;
    MetricSpec spec = flat_spec(2, {1, 1}, {1, 0}, fam);
    NumericFrame fr(spec, {{0.3, -0.2}, {1.0, 1.0}});
    auto ft = fundamental_tensors(fr);
    CHECK(close(ft.F.value(), 2.0));
    CHECK(close(ft.F2.value(), 4.0));
    // Euler identities
    double euler = 0;
    for (int i = 0; i < 2; ++i) euler += ft.ell[i].value() * fr.y()[i].value();
    CHECK(close(euler, ft.F.value(), 1e-12));
    double gyy = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gyy += ft.g[i][j].value() * 1.0;
    CHECK(close(gyy, ft.F2.value(), 1e-12));
}

TEST_CASE("numeric fundamental tensors pass their internal cross-checks on fixtures") {
    std::vector<Family> fams;
    for (long m : {1L, 2L, 3L, 4L})
        for (auto [c, r] : std::vector<std::pair<long, long>>{{1, 0}, {1, 1}, {2, -1}}) {
            Family f;
            f.kind = FamilyKind::GeneralizedMKropina;
            f.m = Param{m};
            f.c = Param{c};
            f.r = Param{r};
            fams.push_back(f);
        }
    for (const auto& fam : fams) {
        MetricSpec spec = curved_spec(fam);
        // conic point: beta = y1 + x1 y2 > 0, md > 0 checked by the frame
        EvalPoint at{{0.5, 0.25}, {1.0, 0.75}};
        try {
            NumericFrame fr(spec, at);
            auto ft = fundamental_tensors(fr); // throws on any route mismatch
            CHECK(std::isfinite(ft.det_g.value()));
        } catch (const DomainViolation&) {
            // (c, r) = (2, -1) can place individual points outside the cone
        }
    }
}

TEST_CASE("Lorentzian alpha works on both signature cones") {
    Family fam;
    fam.kind = FamilyKind::GeneralizedMKropina;
    fam.m = Param{2L};
    fam.c = Param{1L};
    fam.r = Param{1L};
    MetricSpec spec = flat_spec(2, {-1, 1}, {1, 1}, fam);
    // spacelike cone: alpha^2 = -y1^2 + y2^2 > 0
    NumericFrame frp(spec, {{0.0, 0.0}, {0.5, 2.0}});
    CHECK(frp.sigma() == +1);
    auto ftp = fundamental_tensors(frp);
    CHECK(std::isfinite(ftp.det_g.value()));
    // timelike cone: sigma = -1, md = |Q| + beta^2 still positive
    NumericFrame frm(spec, {{0.0, 0.0}, {2.0, 0.5}});
    CHECK(frm.sigma() == -1);
    auto ftm = fundamental_tensors(frm);
    CHECK(std::isfinite(ftm.det_g.value()));
}

TEST_CASE("pseudo-riemannian family has eta = 1 and vanishing Cartan tensor") {
    Family fam;
    fam.kind = FamilyKind::PseudoRiemannian;
    fam.c = Param{1L};
    fam.r = Param{2L};
    MetricSpec spec = flat_spec(2, {1, 1}, {1, 0}, fam);
    NumericFrame fr(spec, {{0.1, 0.2}, {0.7, 0.4}});
    auto ft = fundamental_tensors(fr);
    CHECK(close(ft.eta.value(), 1.0, 1e-14));
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(ft.I[i].value()) < 1e-12);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) CHECK(std::abs(ft.C[i][j][k].value()) < 1e-12);
    }

    // exact backend: same conclusions as certificates
    ExactFrame ef(spec, {rat(1, 10), rat(1, 5)});
    auto et = fundamental_tensors(ef);
    CHECK(et.eta.value() == ratfun::ExtScalar::constant(ef.context(), rat(1)));
    for (int i = 0; i < 2; ++i) CHECK(et.I[i].is_zero());
}

TEST_CASE("exact backend certifies rationality split between odd and even m") {
    for (long m : {1L, 2L, 3L, 4L}) {
        Family fam;
        fam.kind = FamilyKind::GeneralizedMKropina;
        fam.m = Param{m};
        fam.c = Param{1L};
        fam.r = Param{1L};
        MetricSpec spec = curved_spec(fam);
        ExactFrame fr(spec, {rat(1, 2), rat(1, 4)});
        auto ft = fundamental_tensors(fr);

        const bool odd = (m % 2 != 0);
        CHECK(ft.F.value().is_rational() ==
              (odd ? Certificate::Rational : Certificate::Irrational));
        CHECK(ft.F2.value().is_rational() == Certificate::Rational);
        CHECK(ft.eta.value().is_rational() == Certificate::Rational);
        for (int i = 0; i < 2; ++i) {
            CHECK(ft.ell[i].value().is_rational() ==
                  (odd ? Certificate::Rational : Certificate::Irrational));
            CHECK(ft.I[i].value().is_rational() == Certificate::Rational);
            for (int j = 0; j < 2; ++j) {
                CHECK(ft.g[i][j].value().is_rational() == Certificate::Rational);
                CHECK(ft.h[i][j].value().is_rational() == Certificate::Rational);
                for (int k = 0; k < 2; ++k)
                    CHECK(ft.C[i][j][k].value().is_rational() == Certificate::Rational);
            }
        }
    }
}

TEST_CASE("numeric and exact backends agree at shared rational points") {
    Family fam;
    fam.kind = FamilyKind::GeneralizedMKropina;
    fam.m = Param{3L};
    fam.c = Param{1L};
    fam.r = Param{1L};
    MetricSpec spec = curved_spec(fam);
    std::vector<Rational> x0{rat(1, 2), rat(1, 4)};
    ExactFrame ef(spec, x0);
    auto et = fundamental_tensors(ef);

    std::vector<Rational> yq{rat(1), rat(3, 4)};
    EvalPoint at{{0.5, 0.25}, {1.0, 0.75}};
    NumericFrame nf(spec, at);
    auto nt = fundamental_tensors(nf);

    CHECK(close(ef.value_at(et.F, yq), nt.F.value()));
    CHECK(close(ef.value_at(et.det_g, yq), nt.det_g.value()));
    for (int i = 0; i < 2; ++i) {
        CHECK(close(ef.value_at(et.ell[i], yq), nt.ell[i].value()));
        CHECK(close(ef.value_at(et.I[i], yq), nt.I[i].value()));
        for (int j = 0; j < 2; ++j)
            CHECK(close(ef.value_at(et.g[i][j], yq), nt.g[i][j].value()));
    }
}

TEST_CASE("homogeneity: F(x, lam y) = lam F(x, y)") {
    Family fam;
    fam.kind = FamilyKind::GeneralizedMKropina;
    fam.m = Param{2L};
    fam.c = Param{1L};
    fam.r = Param{1L};
    MetricSpec spec = curved_spec(fam);
    for (double lam : {2.0, 3.0, 0.5}) {
        EvalPoint a{{0.5, 0.25}, {1.0, 0.75}};
        EvalPoint b{{0.5, 0.25}, {lam * 1.0, lam * 0.75}};
        auto Fa = fundamental_tensors(NumericFrame(spec, a)).F.value();
        auto Fb = fundamental_tensors(NumericFrame(spec, b)).F.value();
        CHECK(close(Fb, lam * Fa, 1e-12));
    }
    // exact: substitution y -> 2y multiplies F by exactly 2
    ExactFrame ef(spec, {rat(1, 2), rat(1, 4)});
    auto et = fundamental_tensors(ef);
    auto scaled = et.F.value().scale_fiber(rat(2));
    auto doubled = ratfun::ExtScalar::constant(ef.context(), rat(2)) * et.F.value();
    CHECK(scaled == doubled);
}
