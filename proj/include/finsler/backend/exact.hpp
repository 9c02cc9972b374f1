#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finsler/geometry/metric_spec.hpp"
#include "finsler/ratfun/extscalar.hpp"

namespace finsler::backend {

using ratfun::Certificate;
using ratfun::ExtContextPtr;
using ratfun::ExtScalar;
using ratfun::MultiPoly;
using ratfun::RatFun;

// Exact backend scalar: a second-order truncated Taylor expansion in x
// around a rational chart point whose coefficients are exact y-symbolic
// extension scalars. Base derivatives read Taylor slots (and consume
// validity); fiber derivatives are formal and never truncate, which is what
// makes rationality certificates in y possible at all.
class XJet {
  public:
    XJet() = default;

    static XJet constant(const ExtContextPtr& ctx, int n, const Rational& q) {
        return from_value(n, ExtScalar::constant(ctx, q));
    }

    static XJet from_value(int n, ExtScalar v) {
        XJet j(n, v.context());
        j.c_[0] = std::move(v);
        return j;
    }

    // fiber coordinate y^i as a field: constant in x
    static XJet seed_y(const ExtContextPtr& ctx, int n, int i) {
        return from_value(
            n, ExtScalar::from_rat(ctx, RatFun::variable(ctx->nvars_base(),
                                                         ctx->nvars_fiber(), n + i)));
    }

    // an x-field from its Taylor data: value, gradient, half-Hessian
    static XJet from_taylor(const ExtContextPtr& ctx, int n, std::vector<ExtScalar> coeffs) {
        XJet j(n, ctx);
        if (coeffs.size() != j.c_.size())
            throw DimensionMismatch("taylor coefficient count mismatch");
        j.c_ = std::move(coeffs);
        return j;
    }

    int dim() const { return n_; }
    int order_x() const { return ox_; }

    const ExtScalar& value() const { return c_[0]; }

    const ExtScalar& taylor1(int i) const {
        need_(1);
        return c_[1 + i];
    }
    const ExtScalar& taylor2(int i, int j) const {
        need_(2);
        return c_[pair_slot_(std::min(i, j), std::max(i, j))];
    }

    friend XJet operator-(const XJet& a) {
        XJet r = a;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend XJet operator+(const XJet& a, const XJet& b) {
        a.check_(b);
        XJet r = a;
        r.ox_ = std::min(a.ox_, b.ox_);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        r.clear_invalid_();
        return r;
    }
    friend XJet operator-(const XJet& a, const XJet& b) { return a + (-b); }

    friend XJet operator*(const XJet& a, const XJet& b) {
        a.check_(b);
        XJet r(a.n_, a.ctx_);
        r.ox_ = std::min(a.ox_, b.ox_);
        const int n = a.n_;
        r.c_[0] = a.c_[0] * b.c_[0];
        if (r.ox_ >= 1)
            for (int i = 0; i < n; ++i)
                r.c_[1 + i] = a.c_[0] * b.c_[1 + i] + a.c_[1 + i] * b.c_[0];
        if (r.ox_ >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    ExtScalar acc = a.c_[0] * b.c_[pair_slot_n_(n, i, j)] +
                                    a.c_[pair_slot_n_(n, i, j)] * b.c_[0];
                    if (i == j)
                        acc += a.c_[1 + i] * b.c_[1 + i];
                    else
                        acc += a.c_[1 + i] * b.c_[1 + j] + a.c_[1 + j] * b.c_[1 + i];
                    r.c_[pair_slot_n_(n, i, j)] = std::move(acc);
                }
        r.clear_invalid_();
        return r;
    }

    friend XJet operator/(const XJet& f, const XJet& g) {
        f.check_(g);
        if (g.c_[0].is_zero()) throw DivisionByZero("exact jet division by zero value");
        XJet r(f.n_, f.ctx_);
        r.ox_ = std::min(f.ox_, g.ox_);
        const int n = f.n_;
        r.c_[0] = f.c_[0] / g.c_[0];
        if (r.ox_ >= 1)
            for (int i = 0; i < n; ++i)
                r.c_[1 + i] = (f.c_[1 + i] - r.c_[0] * g.c_[1 + i]) / g.c_[0];
        if (r.ox_ >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    ExtScalar acc = f.c_[pair_slot_n_(n, i, j)] -
                                    r.c_[0] * g.c_[pair_slot_n_(n, i, j)];
                    if (i == j)
                        acc -= r.c_[1 + i] * g.c_[1 + i];
                    else
                        acc -= r.c_[1 + i] * g.c_[1 + j] + r.c_[1 + j] * g.c_[1 + i];
                    r.c_[pair_slot_n_(n, i, j)] = acc / g.c_[0];
                }
        r.clear_invalid_();
        return r;
    }

    XJet& operator+=(const XJet& o) { return *this = *this + o; }
    XJet& operator-=(const XJet& o) { return *this = *this - o; }
    XJet& operator*=(const XJet& o) { return *this = *this * o; }
    XJet& operator/=(const XJet& o) { return *this = *this / o; }

    XJet pow(long e) const {
        XJet acc = constant(ctx_, n_, Rational(1));
        acc.ox_ = ox_;
        if (e == 0) return acc;
        XJet base = *this;
        if (e < 0) {
            base = acc / base;
            e = -e;
        }
        while (e) {
            if (e & 1) acc *= base;
            if (e >>= 1) base *= base;
        }
        return acc;
    }

    // base-partial derivative field; consumes one Taylor order
    XJet dx(int i) const {
        if (ox_ == 0) throw OrderExhausted("x-derivative beyond exact jet validity");
        XJet r(n_, ctx_);
        r.ox_ = ox_ - 1;
        r.c_[0] = c_[1 + i];
        if (r.ox_ >= 1)
            for (int j = 0; j < n_; ++j) {
                ExtScalar v = c_[pair_slot_(std::min(i, j), std::max(i, j))];
                if (i == j) v = v + v; // Taylor: (kappa_i + 1) multiplicity
                r.c_[1 + j] = std::move(v);
            }
        r.clear_invalid_();
        return r;
    }

    // fiber-partial derivative: formal on every coefficient, no truncation
    XJet dy(int i) const {
        XJet r = *this;
        const int var = n_ + i;
        for (auto& v : r.c_) v = v.diff(var);
        return r;
    }

    // sqrt of the radicand field itself (value slot must be the context
    // radicand); the root's value slot is the extension element w
    static XJet sqrt_radicand(const XJet& md) {
        const auto& ctx = md.ctx_;
        if (!(md.value() ==
              ExtScalar::from_rat(ctx, RatFun(ctx->radicand()))))
            throw MixedRadicand("sqrt_radicand: value slot differs from the context radicand");
        XJet r(md.n_, ctx);
        r.ox_ = md.ox_;
        const ExtScalar w = ExtScalar::w(ctx);
        const ExtScalar two = ExtScalar::constant(ctx, Rational(2));
        r.c_[0] = w;
        const int n = md.n_;
        if (r.ox_ >= 1)
            for (int i = 0; i < n; ++i) r.c_[1 + i] = md.c_[1 + i] / (two * w);
        if (r.ox_ >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    ExtScalar acc = md.c_[pair_slot_n_(n, i, j)];
                    if (i == j)
                        acc -= r.c_[1 + i] * r.c_[1 + i];
                    else
                        acc -= two * (r.c_[1 + i] * r.c_[1 + j]);
                    r.c_[pair_slot_n_(n, i, j)] = acc / (two * w);
                }
        return r;
    }

    bool is_zero() const {
        for (const auto& v : c_)
            if (!v.is_zero()) return false;
        return true;
    }

    // equality on every slot both sides can vouch for
    friend bool equal_valid(const XJet& a, const XJet& b) {
        a.check_(b);
        const int n = a.n_, ox = std::min(a.ox_, b.ox_);
        if (!(a.c_[0] == b.c_[0])) return false;
        if (ox >= 1)
            for (int i = 0; i < n; ++i)
                if (!(a.c_[1 + i] == b.c_[1 + i])) return false;
        if (ox >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    if (!(a.c_[pair_slot_n_(n, i, j)] == b.c_[pair_slot_n_(n, i, j)]))
                        return false;
        return true;
    }

    const ExtContextPtr& context() const { return ctx_; }

  private:
    XJet(int n, ExtContextPtr ctx) : n_(n), ctx_(std::move(ctx)) {
        ExtScalar z = ExtScalar::constant(ctx_, Rational(0));
        c_.assign(1 + n_ + n_ * (n_ + 1) / 2, z);
    }

    static int pair_slot_n_(int n, int i, int j) {
        return 1 + n + i * n - i * (i - 1) / 2 + (j - i);
    }
    int pair_slot_(int i, int j) const { return pair_slot_n_(n_, i, j); }

    void need_(int k) const {
        if (ox_ < k) throw OrderExhausted("exact jet read beyond validity");
    }
    void check_(const XJet& o) const {
        if (n_ != o.n_) throw DimensionMismatch("exact jets of different dimension");
    }
    void clear_invalid_() {
        if (ox_ >= 2) return;
        ExtScalar z = ExtScalar::constant(ctx_, Rational(0));
        if (ox_ < 1)
            for (int i = 0; i < n_; ++i) c_[1 + i] = z;
        for (std::size_t k = 1 + n_; k < c_.size(); ++k) c_[k] = z;
    }

    int n_ = 0;
    int ox_ = 2;
    ExtContextPtr ctx_;
    std::vector<ExtScalar> c_;
};

// Exact inverse of a rational matrix (Gauss-Jordan, exact pivots).
inline std::vector<std::vector<Rational>> rational_mat_inv(
    std::vector<std::vector<Rational>> m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!rat_is_zero(m[r][col])) {
                piv = r;
                break;
            }
        if (piv < 0) throw DegenerateMetric("alpha matrix is singular at the chart point");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rational p = m[col][col];
        for (int j = 0; j < n; ++j) {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || rat_is_zero(m[r][col])) continue;
            Rational f = m[r][col];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// Exact evaluation frame: the chart point x0 is pinned to rational
// coordinates, y stays symbolic. sgn(alpha^2) is locally constant on the
// working cone and enters as the context constant `sigma`.
class ExactFrame {
  public:
    using S = XJet;
    using MetricSpec = geometry::MetricSpec;
    using FamilyKind = geometry::FamilyKind;

    ExactFrame(const MetricSpec& spec, std::vector<Rational> x0, int sigma = +1)
        : spec_(&spec), n_(spec.n), x0_(std::move(x0)), sigma_(sigma),
          sign_branch_(spec.family.sign) {
        spec.validate();
        if (!spec.all_polynomial())
            throw ExactBackendUnavailable("exact backend needs polynomial coefficients");
        if (spec.n > 4)
            throw ExactBackendUnavailable("exact backend supports dimension <= 4");
        if (spec.family.kind != FamilyKind::PseudoRiemannian &&
            !spec.family.m_eff().is_integer())
            throw ExactBackendUnavailable("exact backend needs integer m");
        if (!spec.family.c_eff().q || !spec.family.r_eff().q)
            throw ExactBackendUnavailable("exact backend needs rational c and r");
        if (static_cast<int>(x0_.size()) != n_)
            throw DimensionMismatch("chart point dimension mismatch");
        if (sigma_ != 1 && sigma_ != -1) throw DomainViolation("sigma must be +1 or -1");

        const Rational c = *spec.family.c_eff().q, r = *spec.family.r_eff().q;

        // slot-0 building blocks as plain polynomials in y
        MultiPoly beta0(n_, n_), qa0(n_, n_);
        for (int i = 0; i < n_; ++i) {
            MultiPoly yi = MultiPoly::variable(n_, n_, n_ + i);
            beta0 += spec.beta[i].poly->eval_base(x0_) * yi;
            for (int j = 0; j < n_; ++j)
                qa0 += spec.a(i, j).poly->eval_base(x0_) * yi *
                       MultiPoly::variable(n_, n_, n_ + j);
        }
        MultiPoly a0 = qa0 * rat(sigma_);
        MultiPoly md0 = a0 * c + beta0 * beta0 * r;

        // exact b^2 at the chart point
        std::vector<std::vector<Rational>> am(n_, std::vector<Rational>(n_));
        std::vector<Rational> bv(n_);
        for (int i = 0; i < n_; ++i) {
            bv[i] = spec.beta[i].poly->eval_base(x0_).constant_value();
            for (int j = 0; j < n_; ++j)
                am[i][j] = spec.a(i, j).poly->eval_base(x0_).constant_value();
        }
        auto ainv = rational_mat_inv(am);
        Rational b2(0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) b2 += ainv[i][j] * bv[i] * bv[j];

        // structural reduction factors: beta, alpha^2, the radicand and the
        // determinant kernel phi*X (cleared of known beta/A/md powers); a
        // redundant factor only costs a failed trial division, never
        // correctness. T below is phiX * beta^(2m+2) A / md^(m-1) expanded
        // to a plain polynomial.
        std::vector<MultiPoly> factors{beta0, qa0, md0};
        {
            MultiPoly bb = beta0 * beta0;
            MultiPoly snb2 = MultiPoly::constant(n_, n_, b2 * rat(sigma_)) * a0 - bb;
            MultiPoly T(n_, n_);
            if (spec.family.kind == FamilyKind::PseudoRiemannian) {
                // phiX * A md = c A (md + r (sigma b^2 A - beta^2))
                T = md0 + snb2 * r;
            } else {
                const Rational mq = *spec.family.m_eff().q;
                // phiX * beta^(2m+2) A / md^(m-1)
                T = bb * md0 * md0 - bb * (bb * r - a0 * (c * mq)) * md0 +
                    snb2 * (a0 * (c * mq) + bb * r) * a0 * (c * (mq + 1));
            }
            if (!T.is_zero() && !T.is_constant()) factors.push_back(T);
        }

        ctx_ = ratfun::make_ext_context(md0, std::move(factors));

        // seeds
        for (int i = 0; i < n_; ++i) y_.push_back(XJet::seed_y(ctx_, n_, i));
        for (int i = 0; i < n_; ++i) x_.push_back(coordinate_field_(i));
        alpha_.assign(n_, std::vector<XJet>(n_, XJet::constant(ctx_, n_, Rational(0))));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) alpha_[i][j] = field_jet_(*spec.a(i, j).poly);
        for (int i = 0; i < n_; ++i) b_.push_back(field_jet_(*spec.beta[i].poly));
    }

    int n() const { return n_; }
    const MetricSpec& spec() const { return *spec_; }
    FamilyKind family() const { return spec_->family.kind; }
    int sigma() const { return sigma_; }
    int sign_branch() const { return sign_branch_; }
    const ExtContextPtr& context() const { return ctx_; }
    const std::vector<Rational>& x0() const { return x0_; }

    double m_d() const { return spec_->family.m_eff().d; }
    S m_const() const { return constant(*spec_->family.m_eff().q); }
    S c_const() const { return constant(*spec_->family.c_eff().q); }
    S r_const() const { return constant(*spec_->family.r_eff().q); }

    const std::vector<S>& x() const { return x_; }
    const std::vector<S>& y() const { return y_; }
    const std::vector<std::vector<S>>& alpha() const { return alpha_; }
    const std::vector<S>& b() const { return b_; }

    S constant(const Rational& q) const { return XJet::constant(ctx_, n_, q); }
    S constant(long v) const { return XJet::constant(ctx_, n_, rat(v)); }

    S dx(const S& s, int i) const { return s.dx(i); }
    S dy(const S& s, int i) const { return s.dy(i); }

    S pow_param(const S& base, double e) const {
        double ip;
        if (std::modf(e, &ip) != 0.0)
            throw ExactBackendUnavailable("exact backend hit a non-integer exponent");
        return base.pow(static_cast<long>(ip));
    }
    S sqrt_md(const S& md) const { return XJet::sqrt_radicand(md); }

    void assert_close(const S& a, const S& b, const char* what) const {
        if (!equal_valid(a, b))
            throw ConsistencyError(std::string(what) + ": exact routes disagree");
    }
    void assert_close(const S& a, const S& b, const char* what, const S&) const {
        assert_close(a, b, what);
    }

    void check_den(const char* name, const S& s) const {
        if (s.value().is_zero())
            throw SingularDenominator(name, "denominator vanishes identically");
    }

    void assert_zero(const S& v, const S&, const char* what) const {
        if (!v.value().is_zero())
            throw ConsistencyError(std::string(what) + ": expected exact zero");
    }

    bool is_zero(const S& s) const { return s.value().is_zero(); }

    // numeric value of an exact scalar at a rational fiber point
    double value_at(const S& s, const std::vector<Rational>& ypt) const {
        std::vector<Rational> vals = x0_;
        vals.insert(vals.end(), ypt.begin(), ypt.end());
        return s.value().eval_double(vals);
    }

  private:
    XJet coordinate_field_(int i) const {
        std::vector<ExtScalar> c(1 + n_ + n_ * (n_ + 1) / 2,
                                 ExtScalar::constant(ctx_, Rational(0)));
        c[0] = ExtScalar::constant(ctx_, x0_[i]);
        c[1 + i] = ExtScalar::constant(ctx_, Rational(1));
        return XJet::from_taylor(ctx_, n_, std::move(c));
    }

    XJet field_jet_(const MultiPoly& p) const {
        std::vector<ExtScalar> c(1 + n_ + n_ * (n_ + 1) / 2,
                                 ExtScalar::constant(ctx_, Rational(0)));
        auto value_of = [&](const MultiPoly& q) {
            return ExtScalar::constant(ctx_, q.eval_base(x0_).constant_value());
        };
        c[0] = value_of(p);
        std::vector<MultiPoly> d1;
        for (int i = 0; i < n_; ++i) {
            d1.push_back(p.diff(i));
            c[1 + i] = value_of(d1.back());
        }
        int k = 1 + n_;
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                Rational v = d1[i].diff(j).eval_base(x0_).constant_value();
                if (i == j) v /= 2; // Taylor normalization
                c[k++] = ExtScalar::constant(ctx_, v);
            }
        return XJet::from_taylor(ctx_, n_, std::move(c));
    }

    const MetricSpec* spec_;
    int n_;
    std::vector<Rational> x0_;
    int sigma_, sign_branch_;
    ExtContextPtr ctx_;
    std::vector<S> x_, y_, b_;
    std::vector<std::vector<S>> alpha_;
};

} // namespace finsler::backend
