#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/core/error.hpp"
#include "finsler/core/rational.hpp"
#include "finsler/jet/jet.hpp"
#include "finsler/ratfun/multipoly.hpp"

namespace finsler::geometry {

using autodiff::Jet;
using ratfun::MultiPoly;

enum class FamilyKind {
    GeneralizedMKropina, // phi(s) = +- s^-m (c + r s^2)^((1+m)/2)
    MKropina,            // c = 1, r = 0
    Kropina,             // m = 1, c = 1, r = 0
    PseudoRiemannian     // phi(s) = +- sqrt(c + r s^2); F^2 = c alpha^2 + r beta^2
};

inline const char* to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::GeneralizedMKropina: return "generalized-m-kropina";
        case FamilyKind::MKropina: return "m-kropina";
        case FamilyKind::Kropina: return "kropina";
        case FamilyKind::PseudoRiemannian: return "pseudo-riemannian";
    }
    return "?";
}

// Family parameter: exact rational where available (required by the exact
// backend), double mirror always.
struct Param {
    double d = 0.0;
    std::optional<Rational> q;

    Param() = default;
    Param(double v) : d(v) { // NOLINT: implicit by design
        double ip;
        if (std::modf(v, &ip) == 0.0 && std::abs(v) < 1e15) q = rat(static_cast<long>(ip));
    }
    Param(const Rational& r) : d(rat_to_double(r)), q(r) {} // NOLINT
    Param(long v) : d(static_cast<double>(v)), q(rat(v)) {} // NOLINT

    bool is_integer() const { return q && q->get_den() == 1; }
    long as_integer() const {
        if (!is_integer()) throw DomainViolation("parameter is not an integer");
        return static_cast<long>(q->get_num().get_si());
    }
};

struct Family {
    FamilyKind kind = FamilyKind::Kropina;
    Param m{1L}, c{1L}, r{0L};
    int sign = +1; // the +- branch of phi

    // m, c, r with the family's fixed values substituted
    Param m_eff() const { return kind == FamilyKind::Kropina ? Param{1L} : m; }
    Param c_eff() const {
        switch (kind) {
            case FamilyKind::Kropina:
            case FamilyKind::MKropina: return Param{1L};
            default: return c;
        }
    }
    Param r_eff() const {
        switch (kind) {
            case FamilyKind::Kropina:
            case FamilyKind::MKropina: return Param{0L};
            default: return r;
        }
    }
};

// One coefficient function of x: a polynomial (exact backend and default
// numeric path) or an arbitrary smooth closure evaluated in jet arithmetic
// (numeric backend only).
struct CoeffField {
    std::optional<MultiPoly> poly; // over the chart (nb = n, nf = n), fiber-free
    std::function<Jet(const std::vector<Jet>&)> closure;

    CoeffField() = default;
    explicit CoeffField(MultiPoly p) : poly(std::move(p)) {}
    explicit CoeffField(std::function<Jet(const std::vector<Jet>&)> f)
        : closure(std::move(f)) {}

    bool is_zero_poly() const { return poly && poly->is_zero(); }

    Jet eval_jet(const std::vector<Jet>& xjets) const {
        if (closure) return closure(xjets);
        if (!poly) throw ConfigError("coefficient field has neither polynomial nor closure");
        const int n = static_cast<int>(xjets.size());
        std::vector<Jet> vals = xjets;
        for (int i = 0; i < n; ++i) vals.push_back(Jet::constant(n, 0.0)); // unused fiber slots
        return poly->eval_ring<Jet>(vals,
                                    [&](const Rational& q) { return Jet::constant(n, rat_to_double(q)); });
    }
};

// An (alpha,beta)-metric: pseudo-Riemannian coefficients alpha_ij(x), 1-form
// b_i(x) and the phi-family parameters.
struct MetricSpec {
    int n = 0;
    Family family;
    std::vector<CoeffField> alpha; // n*n, row-major, symmetric
    std::vector<CoeffField> beta;  // n
    std::string name;              // optional label for reports

    const CoeffField& a(int i, int j) const { return alpha[i * n + j]; }
    CoeffField& a(int i, int j) { return alpha[i * n + j]; }

    bool all_polynomial() const {
        for (const auto& f : alpha)
            if (!f.poly) return false;
        for (const auto& f : beta)
            if (!f.poly) return false;
        return true;
    }

    bool exact_available() const {
        return all_polynomial() && n >= 2 && n <= 4 &&
               (family.kind == FamilyKind::PseudoRiemannian ||
                family.m_eff().is_integer()) &&
               family.c_eff().q && family.r_eff().q;
    }

    void validate() const {
        if (n < 2) throw ConfigError("dimension must be at least 2");
        if (alpha.size() != static_cast<std::size_t>(n) * n)
            throw ConfigError("alpha must have n*n entries");
        if (beta.size() != static_cast<std::size_t>(n))
            throw ConfigError("beta must have n entries");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const auto &pij = a(i, j).poly, &pji = a(j, i).poly;
                if (pij && pji && !(*pij == *pji))
                    throw ConfigError("alpha must be symmetric");
            }
        if (family.kind != FamilyKind::PseudoRiemannian) {
            const double m = family.m_eff().d, c = family.c_eff().d;
            if (c == 0.0)
                throw ConfigError("c must be nonzero: F would degenerate to a multiple of beta");
            if (m == 0.0)
                throw ConfigError(
                    "m must be nonzero; for m = 0 use the pseudo-riemannian family");
            if (m == -1.0)
                throw ConfigError("m = -1 degenerates F to +-beta and is excluded");
            bool beta_zero = true;
            for (const auto& f : beta)
                if (!f.is_zero_poly() && (f.poly || f.closure)) beta_zero = false;
            if (beta_zero) throw ConfigError("beta must not vanish identically");
        }
        if (family.sign != 1 && family.sign != -1)
            throw ConfigError("sign branch must be +1 or -1");
    }
};

} // namespace finsler::geometry
