#pragma once

#include <string>
#include <utility>
#include <vector>

#include "finsler/ratfun/gcd.hpp"
#include "finsler/ratfun/multipoly.hpp"

namespace finsler::ratfun {

// Rational function num/den over Q(x^1..x^n, y^1..y^n). Canonical form:
// the pair is scaled by the rational gcd of the two contents and the sign
// that makes the denominator's leading coefficient positive, and common
// polynomial factors are stripped when both sides are under the GCD gate.
// Equality always goes through cross-multiplication, so unreduced pairs
// still compare correctly.
class RatFun {
  public:
    RatFun() : num_(0, 0), den_(MultiPoly::constant(0, 0, Rational(1))) {}

    RatFun(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
        canonicalize_();
    }

    explicit RatFun(MultiPoly num)
        : num_(std::move(num)),
          den_(MultiPoly::constant(num_.nvars_base(), num_.nvars_fiber(), Rational(1))) {
        canonicalize_();
    }

    static RatFun constant(int nb, int nf, const Rational& c) {
        return RatFun(MultiPoly::constant(nb, nf, c));
    }
    static RatFun zero(int nb, int nf) { return constant(nb, nf, Rational(0)); }
    static RatFun variable(int nb, int nf, int var) {
        return RatFun(MultiPoly::variable(nb, nf, var));
    }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    int nvars_base() const { return num_.nvars_base(); }
    int nvars_fiber() const { return num_.nvars_fiber(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    Rational constant_value() const {
        if (!is_constant()) throw DomainViolation("constant_value of non-constant RatFun");
        if (num_.is_zero()) return Rational(0);
        return num_.constant_value() / den_.constant_value();
    }

    friend RatFun operator-(const RatFun& f) { return RatFun::raw_(-f.num_, f.den_); }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return RatFun(a.num_ - b.num_, a.den_);
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return zero(a.nvars_base(), a.nvars_fiber());
        // cross-cancellation keeps products from accumulating factors
        MultiPoly an = a.num_, bd = b.den_, bn = b.num_, ad = a.den_;
        cross_cancel_(an, bd);
        cross_cancel_(bn, ad);
        return RatFun(an * bn, ad * bd);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw DivisionByZero("division by the zero rational function");
        if (a.is_zero()) return zero(a.nvars_base(), a.nvars_fiber());
        MultiPoly an = a.num_, bn = b.num_, ad = a.den_, bd = b.den_;
        cross_cancel_(an, bn);
        cross_cancel_(bd, ad);
        return RatFun(an * bd, ad * bn);
    }

    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    RatFun pow(long e) const {
        if (e >= 0) return RatFun(num_.pow(static_cast<unsigned>(e)),
                                  den_.pow(static_cast<unsigned>(e)));
        if (is_zero()) throw DivisionByZero("zero rational function to a negative power");
        return RatFun(den_.pow(static_cast<unsigned>(-e)), num_.pow(static_cast<unsigned>(-e)));
    }

    // Equality as functions, via cross-multiplication.
    bool operator==(const RatFun& o) const { return num_ * o.den_ == o.num_ * den_; }
    bool operator!=(const RatFun& o) const { return !(*this == o); }

    // Formal partial derivative (quotient rule).
    RatFun diff(int var) const {
        if (den_.is_constant())
            return RatFun(num_.diff(var), den_);
        return RatFun(num_.diff(var) * den_ - num_ * den_.diff(var), den_ * den_);
    }

    // Strips the given structural factors from num and den.
    void reduce_with(const std::vector<MultiPoly>& factors) {
        reduce_by_factors(num_, den_, factors);
        canonicalize_();
    }

    Rational eval_exact(const std::vector<Rational>& vals) const {
        Rational d = den_.eval_exact(vals);
        if (rat_is_zero(d)) throw DomainViolation("rational function evaluated at a pole");
        return num_.eval_exact(vals) / d;
    }

    RatFun scale_fiber(const Rational& lam) const {
        return RatFun(num_.scale_fiber(lam), den_.scale_fiber(lam));
    }

    std::string str() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
        return "(" + num_.str() + ") / (" + den_.str() + ")";
    }

  private:
    static RatFun raw_(MultiPoly n, MultiPoly d) {
        RatFun f;
        f.num_ = std::move(n);
        f.den_ = std::move(d);
        return f; // caller guarantees the pair is already canonical
    }

    static void cross_cancel_(MultiPoly& p, MultiPoly& q) {
        if (p.is_constant() || q.is_constant()) return;
        if (p.term_count() > kGcdTermGate || q.term_count() > kGcdTermGate) return;
        MultiPoly g = poly_gcd(p, q);
        if (g.is_constant()) return;
        p = *p.exact_divide(g);
        q = *q.exact_divide(g);
    }

    void canonicalize_() {
        if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
        const int nb = num_.nvars_base(), nf = num_.nvars_fiber();
        if (num_.is_zero()) {
            den_ = MultiPoly::constant(nb, nf, Rational(1));
            return;
        }
        if (!den_.is_constant() && num_.term_count() <= kGcdTermGate &&
            den_.term_count() <= kGcdTermGate) {
            MultiPoly g = poly_gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = *num_.exact_divide(g);
                den_ = *den_.exact_divide(g);
            }
        }
        Rational c = rat_gcd(num_.content(), den_.content());
        if (sgn(den_.leading().second) < 0) c = -c;
        num_ = num_.divided_by(c);
        den_ = den_.divided_by(c);
    }

    MultiPoly num_, den_;
};

} // namespace finsler::ratfun
