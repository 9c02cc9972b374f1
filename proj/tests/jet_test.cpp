#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "finsler/jet/jet.hpp"

using finsler::autodiff::Jet;
using finsler::OrderExhausted;
using finsler::DomainViolation;

namespace {

constexpr int N = 2;

std::vector<int> e(int i) {
    std::vector<int> v(N, 0);
    v[i] = 1;
    return v;
}
std::vector<int> zero() { return std::vector<int>(N, 0); }

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// assorted smooth composite, usable with doubles and with jets
template <class T>
T composite(const std::vector<T>& x, const std::vector<T>& y) {
    using std::pow;
    using std::sqrt;
    T q = x[0] * x[0] + y[0] * y[0] + y[1] * y[1] + 3.0;
    T s = (y[0] * y[1] + x[1] * 2.0 + 5.0) / q;
    return sqrt(q) * s + pow(q, 1.7);
}

double composite_at(std::vector<double> x, std::vector<double> y) {
    return composite<double>(x, y);
}

Jet random_jet(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.3, 2.0);
    std::vector<Jet> x{Jet::seed_x(N, 0, u(rng)), Jet::seed_x(N, 1, u(rng))};
    std::vector<Jet> y{Jet::seed_y(N, 0, u(rng)), Jet::seed_y(N, 1, u(rng))};
    Jet j = x[0] * y[1] + y[0] * y[0] * u(rng) + x[1] + u(rng);
    return j * u(rng) + y[1] * y[0] * x[0];
}

} // namespace

TEST_CASE("coordinate lifts carry exactly one unit derivative") {
    // x = (0,0), y = (1,2); the y2 coordinate function
    Jet j = Jet::seed_y(N, 1, 2.0);
    CHECK(j.value() == 2.0);
    CHECK(j.deriv(zero(), e(1)) == 1.0);
    CHECK(j.deriv(zero(), e(0)) == 0.0);
    CHECK(j.deriv(e(0), zero()) == 0.0);

    // product rule: mixed second derivative of y1*y2 is 1
    Jet p = Jet::seed_y(N, 0, 1.0) * Jet::seed_y(N, 1, 2.0);
    CHECK(p.deriv(zero(), {1, 1}) == 1.0);

    // power rule: fourth y-derivative of y1^4 is 24
    Jet y1 = Jet::seed_y(N, 0, 1.5);
    Jet q = y1 * y1 * y1 * y1;
    CHECK(q.deriv(zero(), {4, 0}) == 24.0);
}

TEST_CASE("jet_pow on the stated examples") {
    Jet four = Jet::constant(N, 4.0);
    Jet r = four.pow(0.5);
    CHECK(r.value() == 2.0);
    CHECK(r.deriv(zero(), e(0)) == 0.0);
    CHECK(r.deriv(e(0), zero()) == 0.0);

    // binomial-series oracle: d/dy1 (1+y1)^(1/2) at y1=0 is 1/2
    Jet b = Jet::seed_y(N, 0, 0.0) + 1.0;
    Jet h = b.pow(0.5);
    CHECK(rel_close(h.deriv(zero(), e(0)), 0.5, 1e-14));
    // second and third coefficients of the binomial series
    CHECK(rel_close(h.deriv(zero(), {2, 0}), -0.25, 1e-14));
    CHECK(rel_close(h.deriv(zero(), {3, 0}), 3.0 / 8.0, 1e-14));

    CHECK_THROWS_AS(Jet::constant(N, -1.0).pow(0.5), DomainViolation);
    // integer exponents fall back to repeated multiplication for any sign
    CHECK(Jet::constant(N, -2.0).pow(3.0).value() == -8.0);
}

TEST_CASE("jet_pow at integer exponents agrees with repeated multiplication") {
    std::mt19937_64 rng(1234);
    for (int it = 0; it < 50; ++it) {
        Jet j = random_jet(rng) + 3.0; // keep the value positive
        Jet a = j.pow(2.0);
        Jet b = j * j;
        for (int i = 0; i < N; ++i) {
            CHECK(rel_close(a.deriv(zero(), e(i)), b.deriv(zero(), e(i)), 1e-12));
            CHECK(rel_close(a.deriv(e(i), zero()), b.deriv(e(i), zero()), 1e-12));
        }
        CHECK(rel_close(a.value(), b.value(), 1e-12));
        CHECK(rel_close(a.deriv(zero(), {2, 2}), b.deriv(zero(), {2, 2}), 1e-12));
    }
}

TEST_CASE("first and second derivatives match central finite differences") {
    std::vector<double> x0{0.7, -0.4}, y0{1.1, 0.9};
    std::vector<Jet> xs, ys;
    for (int i = 0; i < N; ++i) xs.push_back(Jet::seed_x(N, i, x0[i]));
    for (int i = 0; i < N; ++i) ys.push_back(Jet::seed_y(N, i, y0[i]));
    Jet f = composite(xs, ys);

    const double h = 1e-5;
    for (int i = 0; i < N; ++i) {
        auto xp = x0, xm = x0;
        xp[i] += h, xm[i] -= h;
        double fd = (composite_at(xp, y0) - composite_at(xm, y0)) / (2 * h);
        CHECK(rel_close(f.deriv(e(i), zero()), fd, 1e-6));

        auto yp = y0, ym = y0;
        yp[i] += h, ym[i] -= h;
        double fdy = (composite_at(x0, yp) - composite_at(x0, ym)) / (2 * h);
        CHECK(rel_close(f.deriv(zero(), e(i)), fdy, 1e-6));
    }
    // second derivative in y1
    const double H = 1e-4;
    auto yp = y0, ym = y0;
    yp[0] += H, ym[0] -= H;
    double fd2 =
        (composite_at(x0, yp) - 2 * composite_at(x0, y0) + composite_at(x0, ym)) / (H * H);
    CHECK(rel_close(f.deriv(zero(), {2, 0}), fd2, 1e-4));
}

TEST_CASE("product and quotient rules hold to 1e-12 on random jets") {
    std::mt19937_64 rng(777);
    for (int it = 0; it < 50; ++it) {
        Jet f = random_jet(rng) + 2.0, g = random_jet(rng) + 4.0;
        for (int i = 0; i < N; ++i) {
            Jet lhs = (f * g).dy(i);
            Jet rhs = f.dy(i) * g + f * g.dy(i);
            CHECK(rel_close(lhs.value(), rhs.value(), 1e-12));
            CHECK(rel_close(lhs.deriv(zero(), e(1 - i)), rhs.deriv(zero(), e(1 - i)), 1e-12));

            Jet ql = (f / g).dy(i);
            Jet qr = (f.dy(i) * g - f * g.dy(i)) / (g * g);
            CHECK(rel_close(ql.value(), qr.value(), 1e-12));
            CHECK(rel_close(ql.deriv(e(i), zero()), qr.deriv(e(i), zero()), 1e-12));
        }
    }
}

TEST_CASE("derivative operators consume validity and reads past it throw") {
    Jet y1 = Jet::seed_y(N, 0, 1.0);
    Jet f = y1 * y1 * y1 * y1; // oy = 4
    Jet d1 = f.dy(0);
    CHECK(d1.order_y() == 3);
    Jet d4 = d1.dy(0).dy(0).dy(0);
    CHECK(d4.value() == 24.0);
    CHECK_THROWS_AS(d4.dy(0), OrderExhausted);
    CHECK_THROWS_AS(d4.deriv(zero(), e(0)), OrderExhausted);

    Jet x1 = Jet::seed_x(N, 0, 1.0);
    Jet g = x1 * x1;
    CHECK(g.dx(0).dx(0).value() == 2.0);
    CHECK_THROWS_AS(g.dx(0).dx(0).dx(0), OrderExhausted);
}

TEST_CASE("log and exp jets invert each other") {
    std::mt19937_64 rng(52);
    for (int it = 0; it < 20; ++it) {
        Jet f = random_jet(rng) + 3.0;
        Jet g = f.log().exp();
        CHECK(rel_close(g.value(), f.value(), 1e-12));
        CHECK(rel_close(g.deriv(zero(), e(0)), f.deriv(zero(), e(0)), 1e-11));
        CHECK(rel_close(g.deriv(zero(), {2, 1}), f.deriv(zero(), {2, 1}), 1e-10));
    }
}
