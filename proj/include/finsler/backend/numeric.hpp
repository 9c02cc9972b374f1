#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "finsler/core/tolerance.hpp"
#include "finsler/geometry/metric_spec.hpp"
#include "finsler/jet/jet.hpp"

namespace finsler::backend {

using autodiff::EvalPoint;
using autodiff::Jet;
using geometry::FamilyKind;
using geometry::MetricSpec;

// Numeric evaluation frame: one point of the conic domain with every field
// seeded as a (2,4)-jet. Pure value type; evaluation over many points is
// embarrassingly parallel.
class NumericFrame {
  public:
    using S = Jet;

    NumericFrame(const MetricSpec& spec, const EvalPoint& at, Tolerance tol = {},
                 int expected_sigma = 0)
        : spec_(&spec), n_(spec.n), tol_(tol), sign_branch_(spec.family.sign) {
        spec.validate();
        if (static_cast<int>(at.x.size()) != n_ || static_cast<int>(at.y.size()) != n_)
            throw DimensionMismatch("evaluation point dimension mismatch");
        bool y_nonzero = false;
        for (double v : at.y) y_nonzero |= (v != 0.0);
        if (!y_nonzero) throw DomainViolation("y = 0 is outside the slit tangent bundle");

        for (int i = 0; i < n_; ++i) x_.push_back(Jet::seed_x(n_, i, at.x[i]));
        for (int i = 0; i < n_; ++i) y_.push_back(Jet::seed_y(n_, i, at.y[i]));
        alpha_.assign(n_, std::vector<Jet>(n_, Jet::constant(n_, 0.0)));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) alpha_[i][j] = spec.a(i, j).eval_jet(x_);
        for (int i = 0; i < n_; ++i) b_.push_back(spec.beta[i].eval_jet(x_));

        // conic-domain checks
        double qa = 0, beta = 0;
        for (int i = 0; i < n_; ++i) {
            beta += b_[i].value() * at.y[i];
            for (int j = 0; j < n_; ++j) qa += alpha_[i][j].value() * at.y[i] * at.y[j];
        }
        if (qa == 0.0) throw DomainViolation("alpha^2 vanishes at this point");
        if (beta == 0.0) throw DomainViolation("beta vanishes at this point (kernel of the 1-form)");
        sigma_ = qa > 0 ? +1 : -1;
        if (expected_sigma != 0 && expected_sigma != sigma_)
            throw DomainViolation("sign of alpha^2 changed within one computation");
        const double c = spec.family.c_eff().d, r = spec.family.r_eff().d;
        const double md = c * sigma_ * qa + r * beta * beta;
        if (md <= 0.0) throw DomainViolation("c*alpha^2 + r*beta^2 is not positive here");
        if (spec.family.kind != FamilyKind::PseudoRiemannian) {
            const double m = spec.family.m_eff().d;
            // phi' = 0 locus r s^2 = c m (pointwise restriction)
            if (std::abs(r * beta * beta - c * m * sigma_ * qa) <=
                tol_.atol * std::max(1.0, std::abs(c * m * qa)))
                throw DegenerateMetric("r s^2 = c m at this point: phi' vanishes");
        }
    }

    int n() const { return n_; }
    const MetricSpec& spec() const { return *spec_; }
    FamilyKind family() const { return spec_->family.kind; }
    int sigma() const { return sigma_; }
    int sign_branch() const { return sign_branch_; }
    const Tolerance& tol() const { return tol_; }

    double m_d() const { return spec_->family.m_eff().d; }
    S m_const() const { return constant_d_(spec_->family.m_eff().d); }
    S c_const() const { return constant_d_(spec_->family.c_eff().d); }
    S r_const() const { return constant_d_(spec_->family.r_eff().d); }

    const std::vector<S>& x() const { return x_; }
    const std::vector<S>& y() const { return y_; }
    const std::vector<std::vector<S>>& alpha() const { return alpha_; }
    const std::vector<S>& b() const { return b_; }

    S constant(const Rational& q) const { return Jet::constant(n_, rat_to_double(q)); }
    S constant(long v) const { return Jet::constant(n_, static_cast<double>(v)); }

    S dx(const S& s, int i) const { return s.dx(i); }
    S dy(const S& s, int i) const { return s.dy(i); }

    S pow_param(const S& base, double e) const { return base.pow(e); }
    S sqrt_md(const S& md) const { return md.sqrt(); }

    static double value(const S& s) { return s.value(); }

    void assert_close(const S& a, const S& b, const char* what) const {
        if (!tol_.close(a.value(), b.value()))
            throw ConsistencyError(std::string(what) + ": routes disagree (" +
                                   std::to_string(a.value()) + " vs " +
                                   std::to_string(b.value()) + ")");
    }

    // variant with an explicit magnitude: route comparisons that cancel
    // large intermediate terms are judged against the scale those terms
    // live at, not the (possibly tiny) result
    void assert_close(const S& a, const S& b, const char* what, const S& scale) const {
        double thr = tol_.atol + tol_.rtol * std::max({std::abs(a.value()),
                                                       std::abs(b.value()),
                                                       std::abs(scale.value())});
        if (std::abs(a.value() - b.value()) > thr)
            throw ConsistencyError(std::string(what) + ": routes disagree (" +
                                   std::to_string(a.value()) + " vs " +
                                   std::to_string(b.value()) + ")");
    }

    void check_den(const char* name, const S& s) const {
        if (!std::isfinite(s.value()) || std::abs(s.value()) < 1e-250)
            throw SingularDenominator(name, "vanishing denominator at this point");
    }

    // v must vanish up to roundoff at the scale of `scale`
    void assert_zero(const S& v, const S& scale, const char* what) const {
        if (std::abs(v.value()) > tol_.atol + tol_.rtol * std::abs(scale.value()))
            throw ConsistencyError(std::string(what) + ": expected zero, got " +
                                   std::to_string(v.value()));
    }

    bool is_zero(const S& s) const { return std::abs(s.value()) <= tol_.atol; }

  private:
    S constant_d_(double v) const { return Jet::constant(n_, v); }

    const MetricSpec* spec_;
    int n_;
    Tolerance tol_;
    int sigma_ = +1, sign_branch_ = +1;
    std::vector<S> x_, y_, b_;
    std::vector<std::vector<S>> alpha_;
};

} // namespace finsler::backend
