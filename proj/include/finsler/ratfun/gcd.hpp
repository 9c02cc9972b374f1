#pragma once

#include <optional>
#include <vector>

#include "finsler/ratfun/multipoly.hpp"

namespace finsler::ratfun {

// Full multivariate GCD is optional: canonical forms only need content
// normalization, and equality always goes through cross-multiplication.
// It is gated by size thresholds plus a hard work budget so worst-case cost
// stays bounded; when any gate trips the reduction is simply skipped.
constexpr std::size_t kGcdTermGate = 512;
constexpr unsigned kGcdDegreeGate = 24;
constexpr unsigned kGcdTotalDegreeGate = 64;
constexpr long kGcdWorkBudget = 40000;

namespace detail {

// Views p as a univariate polynomial in `var`, coefficients in the rest.
inline std::vector<MultiPoly> coeffs_in(const MultiPoly& p, int var) {
    unsigned d = p.degree_in(var);
    std::vector<MultiPoly> c(d + 1, MultiPoly(p.nvars_base(), p.nvars_fiber()));
    for (const auto& t : p.terms()) {
        unsigned e = mono_get(t.first, var);
        MultiPoly m = MultiPoly::from_terms(p.nvars_base(), p.nvars_fiber(),
                                            {{mono_set(t.first, var, 0), t.second}});
        c[e] += m;
    }
    return c;
}

// Pseudo-remainder of a by b in `var`, content-stripped after every
// elimination step to control swell. A scalar multiple of the true pseudo
// remainder, which is all a primitive PRS needs. The budget counts
// coefficient multiplications, the actual unit of work.
inline MultiPoly pseudo_rem(const MultiPoly& a, const MultiPoly& b, int var, long& budget) {
    auto cb = coeffs_in(b, var);
    const unsigned db = static_cast<unsigned>(cb.size() - 1);
    const MultiPoly& lcb = cb.back();
    MultiPoly r = a;
    while (!r.is_zero()) {
        unsigned dr = r.degree_in(var);
        if (dr < db) break;
        budget -= static_cast<long>(r.term_count() * (lcb.term_count() + b.term_count()));
        if (budget < 0) throw OverflowError("gcd work budget exhausted");
        auto cr = coeffs_in(r, var);
        const MultiPoly& lcr = cr[dr];
        MultiPoly shift =
            MultiPoly::variable(a.nvars_base(), a.nvars_fiber(), var).pow(dr - db);
        r = lcb * r - lcr * shift * b;
        if (!r.is_zero()) r = r.divided_by(r.content());
    }
    return r;
}

// gcd with a monomial: per-variable minimum exponents.
inline MultiPoly monomial_gcd(MonoKey mono, const MultiPoly& p, int nb, int nf) {
    MonoKey g = 0;
    for (int v = 0; v < nb + nf; ++v) {
        unsigned e = mono_get(mono, v);
        if (!e) continue;
        unsigned mn = e;
        for (const auto& t : p.terms()) mn = std::min(mn, mono_get(t.first, v));
        g = mono_set(g, v, mn);
    }
    return MultiPoly::from_terms(nb, nf, {{g, Rational(1)}});
}

// Deterministic coprimality filter: substitute fixed pseudo-random integers
// for all variables but one and take a univariate gcd of the images. If for
// every shared variable the image gcd is constant, any common factor would
// have to vanish at those points; we then skip the expensive PRS. A missed
// reduction is harmless, canonical forms just stay larger.
inline bool images_coprime(const MultiPoly& a, const MultiPoly& b, long& budget) {
    const int nv = a.nvars();
    static const long pts[kMaxVars] = {3, -5, 7, -11, 13, -17, 19, -23};
    for (int v = 0; v < nv; ++v) {
        if (!a.depends_on(v) || !b.depends_on(v)) continue;
        budget -= static_cast<long>(a.term_count() + b.term_count());
        if (budget < 0) throw OverflowError("gcd work budget exhausted");
        auto image = [&](const MultiPoly& p) {
            // dense univariate coefficients in v
            std::vector<Rational> c(p.degree_in(v) + 1, Rational(0));
            for (const auto& t : p.terms()) {
                Rational val = t.second;
                for (int u = 0; u < nv; ++u) {
                    if (u == v) continue;
                    unsigned e = mono_get(t.first, u);
                    if (e) val *= rat_pow(Rational(pts[u]), e);
                }
                c[mono_get(t.first, v)] += val;
            }
            while (c.size() > 1 && rat_is_zero(c.back())) c.pop_back();
            return c;
        };
        auto pa = image(a), pb = image(b);
        auto is_zero_p = [](const std::vector<Rational>& p) {
            return p.size() == 1 && rat_is_zero(p[0]);
        };
        // univariate Euclid over Q
        while (!is_zero_p(pb)) {
            while (pa.size() >= pb.size() && !is_zero_p(pa)) {
                Rational q = pa.back() / pb.back();
                std::size_t off = pa.size() - pb.size();
                for (std::size_t i = 0; i < pb.size(); ++i) pa[i + off] -= q * pb[i];
                while (pa.size() > 1 && rat_is_zero(pa.back())) pa.pop_back();
            }
            std::swap(pa, pb);
        }
        if (pa.size() > 1) return false; // possible common factor in v
    }
    return true;
}

inline MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b, long& budget);

// GCD of the univariate-in-var coefficient list (the content w.r.t. var).
inline MultiPoly coeff_gcd(const std::vector<MultiPoly>& c, long& budget) {
    MultiPoly g(c.front().nvars_base(), c.front().nvars_fiber());
    for (const auto& p : c) {
        if (p.is_zero()) continue;
        g = g.is_zero() ? p : gcd_impl(g, p, budget);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

inline MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b, long& budget) {
    const int nb = a.nvars_base(), nf = a.nvars_fiber();
    auto one = MultiPoly::constant(nb, nf, Rational(1));
    if (a.is_zero() && b.is_zero()) return MultiPoly(nb, nf);
    auto normalized = [](MultiPoly p) {
        p = p.divided_by(p.content());
        if (sgn(p.leading().second) < 0) p = -p;
        return p;
    };
    if (a.is_zero()) return normalized(b);
    if (b.is_zero()) return normalized(a);
    if (a.is_constant() || b.is_constant()) return one;
    if (a.term_count() > kGcdTermGate || b.term_count() > kGcdTermGate) return one;
    if (a.total_degree() > kGcdTotalDegreeGate || b.total_degree() > kGcdTotalDegreeGate)
        return one;

    budget -= static_cast<long>(a.term_count() + b.term_count());
    if (budget < 0) throw OverflowError("gcd work budget exhausted");

    if (a.term_count() == 1) return normalized(monomial_gcd(a.leading().first, b, nb, nf));
    if (b.term_count() == 1) return normalized(monomial_gcd(b.leading().first, a, nb, nf));
    if (images_coprime(a, b, budget)) return one;

    // main variable: shared, with the smallest larger degree
    int var = -1;
    unsigned best = ~0u;
    for (int v = 0; v < a.nvars(); ++v) {
        if (!a.depends_on(v) || !b.depends_on(v)) continue;
        unsigned d = std::max(a.degree_in(v), b.degree_in(v));
        if (d < best) best = d, var = v;
    }
    if (var < 0) return one; // no shared variable
    if (best > kGcdDegreeGate) return one;

    auto ca = coeffs_in(a, var);
    auto cb = coeffs_in(b, var);
    MultiPoly cont_a = coeff_gcd(ca, budget);
    MultiPoly cont_b = coeff_gcd(cb, budget);
    MultiPoly cont = gcd_impl(cont_a, cont_b, budget);

    MultiPoly pa = *a.exact_divide(cont_a);
    MultiPoly pb = *b.exact_divide(cont_b);
    if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);

    // primitive PRS
    while (true) {
        MultiPoly r = pseudo_rem(pa, pb, var, budget);
        if (r.is_zero()) break;
        if (r.degree_in(var) == 0) {
            pb = one;
            break;
        }
        auto cr = coeff_gcd(coeffs_in(r, var), budget);
        pa = pb;
        pb = *r.exact_divide(cr);
    }

    MultiPoly g = normalized(cont * pb);
    // cheap safety net: a wrong GCD would corrupt canonical forms
    if (!a.exact_divide(g) || !b.exact_divide(g)) return one;
    return g;
}

} // namespace detail

// Multivariate polynomial GCD over Q via a primitive pseudo-remainder
// sequence. Returns a polynomial with content 1 and positive leading
// coefficient; returns 1 whenever a size gate or the work budget trips.
inline MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    long budget = kGcdWorkBudget;
    try {
        return detail::gcd_impl(a, b, budget);
    } catch (const OverflowError&) {
        return MultiPoly::constant(a.nvars_base(), a.nvars_fiber(), Rational(1));
    }
}

// Divides num and den by every structural factor they share. The factor
// list comes from the evaluation context (beta, alpha^2, the radicand, the
// determinant kernel): those are exactly the denominators tensor algebra
// keeps reintroducing, so peeling them early keeps sizes bounded.
inline void reduce_by_factors(MultiPoly& num, MultiPoly& den,
                              const std::vector<MultiPoly>& factors) {
    if (num.is_zero()) return;
    for (const auto& f : factors) {
        if (f.is_constant()) continue;
        while (true) {
            auto qd = den.exact_divide(f);
            if (!qd) break;
            auto qn = num.exact_divide(f);
            if (!qn) break;
            den = std::move(*qd);
            num = std::move(*qn);
        }
    }
}

} // namespace finsler::ratfun
