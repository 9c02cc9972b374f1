#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "finsler/ratfun/ratfun.hpp"

namespace finsler::ratfun {

enum class Certificate { Rational, Irrational };

inline const char* to_string(Certificate c) {
    return c == Certificate::Rational ? "rational" : "irrational";
}

// Shared per computation: the fixed radicand w^2 (= c*alpha^2 + r*beta^2 at
// the chart point) plus the structural denominators that tensor algebra
// keeps producing. Frozen before any scalars are built.
class ExtContext {
  public:
    explicit ExtContext(MultiPoly radicand, std::vector<MultiPoly> reduce_factors = {})
        : radicand_(std::move(radicand)), factors_(std::move(reduce_factors)) {
        if (radicand_.is_zero())
            throw DomainViolation("radicand is the zero polynomial");
        if (radicand_.sqrt_exact())
            throw PerfectSquareRadicand(
                "radicand " + radicand_.str() +
                " is a perfect square; w would not extend the rational field");
        std::vector<MultiPoly> kept;
        for (auto& f : factors_) {
            if (f.is_zero() || f.is_constant()) continue;
            f = f.divided_by(f.content());
            if (sgn(f.leading().second) < 0) f = -f;
            bool dup = false;
            for (const auto& g : kept) dup |= (g == f);
            if (!dup) kept.push_back(std::move(f));
        }
        factors_ = std::move(kept);
    }

    const MultiPoly& radicand() const { return radicand_; }
    const std::vector<MultiPoly>& reduce_factors() const { return factors_; }
    int nvars_base() const { return radicand_.nvars_base(); }
    int nvars_fiber() const { return radicand_.nvars_fiber(); }

  private:
    MultiPoly radicand_;
    std::vector<MultiPoly> factors_;
};

using ExtContextPtr = std::shared_ptr<const ExtContext>;

inline ExtContextPtr make_ext_context(MultiPoly radicand,
                                      std::vector<MultiPoly> reduce_factors = {}) {
    return std::make_shared<const ExtContext>(std::move(radicand), std::move(reduce_factors));
}

// Element a + b*w of the quadratic extension of the rational-function field
// by w, w^2 = radicand. Closed under ring operations, division and formal
// differentiation; the home of every rationality certificate.
class ExtScalar {
  public:
    ExtScalar() = default;

    ExtScalar(ExtContextPtr ctx, RatFun rat_part, RatFun irr_part)
        : ctx_(std::move(ctx)), a_(std::move(rat_part)), b_(std::move(irr_part)) {
        reduce_();
    }

    static ExtScalar from_rat(ExtContextPtr ctx, RatFun a) {
        RatFun z = RatFun::zero(a.nvars_base(), a.nvars_fiber());
        return ExtScalar(std::move(ctx), std::move(a), std::move(z));
    }

    static ExtScalar constant(const ExtContextPtr& ctx, const Rational& c) {
        return from_rat(ctx, RatFun::constant(ctx->nvars_base(), ctx->nvars_fiber(), c));
    }

    // The extension element w itself.
    static ExtScalar w(const ExtContextPtr& ctx) {
        const int nb = ctx->nvars_base(), nf = ctx->nvars_fiber();
        return ExtScalar(ctx, RatFun::zero(nb, nf), RatFun::constant(nb, nf, Rational(1)));
    }

    const ExtContextPtr& context() const { return ctx_; }
    const RatFun& rat_part() const { return a_; }
    const RatFun& irr_part() const { return b_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    Certificate is_rational() const {
        return b_.is_zero() ? Certificate::Rational : Certificate::Irrational;
    }

    friend ExtScalar operator-(const ExtScalar& e) {
        return ExtScalar::raw_(e.ctx_, -e.a_, -e.b_);
    }
    friend ExtScalar operator+(const ExtScalar& x, const ExtScalar& y) {
        const auto& ctx = merged_ctx_(x, y);
        return ExtScalar(ctx, x.a_ + y.a_, x.b_ + y.b_);
    }
    friend ExtScalar operator-(const ExtScalar& x, const ExtScalar& y) {
        const auto& ctx = merged_ctx_(x, y);
        return ExtScalar(ctx, x.a_ - y.a_, x.b_ - y.b_);
    }
    friend ExtScalar operator*(const ExtScalar& x, const ExtScalar& y) {
        const auto& ctx = merged_ctx_(x, y);
        RatFun rad(ctx->radicand());
        if (x.b_.is_zero() && y.b_.is_zero())
            return ExtScalar(ctx, x.a_ * y.a_, RatFun::zero(x.a_.nvars_base(), x.a_.nvars_fiber()));
        return ExtScalar(ctx, x.a_ * y.a_ + x.b_ * y.b_ * rad, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend ExtScalar operator/(const ExtScalar& x, const ExtScalar& y) {
        const auto& ctx = merged_ctx_(x, y);
        if (y.is_zero()) throw DivisionByZero("division by zero extension scalar");
        if (y.b_.is_zero())
            return ExtScalar(ctx, x.a_ / y.a_, x.b_ / y.a_);
        RatFun rad(ctx->radicand());
        // multiply by the conjugate; the norm a^2 - b^2 w^2 only vanishes
        // for the zero element because the radicand is not a perfect square
        RatFun norm = y.a_ * y.a_ - y.b_ * y.b_ * rad;
        return ExtScalar(ctx, (x.a_ * y.a_ - x.b_ * y.b_ * rad) / norm,
                         (x.b_ * y.a_ - x.a_ * y.b_) / norm);
    }

    ExtScalar& operator+=(const ExtScalar& o) { return *this = *this + o; }
    ExtScalar& operator-=(const ExtScalar& o) { return *this = *this - o; }
    ExtScalar& operator*=(const ExtScalar& o) { return *this = *this * o; }
    ExtScalar& operator/=(const ExtScalar& o) { return *this = *this / o; }

    ExtScalar pow(long e) const {
        ExtScalar acc = constant(ctx_, Rational(1));
        if (e == 0) return acc;
        ExtScalar base = *this;
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

    bool operator==(const ExtScalar& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const ExtScalar& o) const { return !(*this == o); }

    // Formal partial derivative; d(w)/dv = (d radicand/dv) * w / (2 radicand)
    // keeps the result in a + b*w form.
    ExtScalar diff(int var) const {
        RatFun da = a_.diff(var);
        if (b_.is_zero())
            return ExtScalar(ctx_, std::move(da), b_);
        RatFun rad(ctx_->radicand());
        RatFun drad(ctx_->radicand().diff(var));
        RatFun half(MultiPoly::constant(a_.nvars_base(), a_.nvars_fiber(), Rational(1, 2)));
        RatFun db = b_.diff(var) + b_ * half * drad / rad;
        return ExtScalar(ctx_, std::move(da), std::move(db));
    }

    ExtScalar scale_fiber(const Rational& lam) const {
        // valid only when the radicand is fiber-homogeneous of even degree,
        // which holds for c*alpha^2 + r*beta^2; w(lam y) = lam * w(y)
        ExtScalar r = raw_(ctx_, a_.scale_fiber(lam), b_.scale_fiber(lam) * RatFun::constant(
            a_.nvars_base(), a_.nvars_fiber(), lam));
        return r;
    }

    // Numeric value at a full rational chart point.
    double eval_double(const std::vector<Rational>& vals) const {
        double av = rat_to_double(a_.eval_exact(vals));
        if (b_.is_zero()) return av;
        Rational rv = ctx_->radicand().eval_exact(vals);
        if (sgn(rv) < 0)
            throw DomainViolation("radicand negative at evaluation point");
        return av + rat_to_double(b_.eval_exact(vals)) * std::sqrt(rat_to_double(rv));
    }

    std::string str() const {
        if (b_.is_zero()) return a_.str();
        if (a_.is_zero()) return "(" + b_.str() + ")*w";
        return a_.str() + " + (" + b_.str() + ")*w";
    }

  private:
    static ExtScalar raw_(const ExtContextPtr& ctx, RatFun a, RatFun b) {
        ExtScalar e;
        e.ctx_ = ctx;
        e.a_ = std::move(a);
        e.b_ = std::move(b);
        return e;
    }

    static const ExtContextPtr& merged_ctx_(const ExtScalar& x, const ExtScalar& y) {
        if (!x.ctx_) return y.ctx_;
        if (!y.ctx_) return x.ctx_;
        if (x.ctx_ == y.ctx_) return x.ctx_;
        if (x.ctx_->radicand() == y.ctx_->radicand()) return x.ctx_;
        throw MixedRadicand("extension scalars with different radicands combined");
    }

    void reduce_() {
        if (!ctx_) return;
        const auto& f = ctx_->reduce_factors();
        if (f.empty()) return;
        a_.reduce_with(f);
        b_.reduce_with(f);
    }

    ExtContextPtr ctx_;
    RatFun a_, b_;
};

// Spec-facing decision procedure: certifies whether e lies in the rational
// function field. Exact, no tolerances.
inline Certificate is_rational(const ExtScalar& e) { return e.is_rational(); }

} // namespace finsler::ratfun
