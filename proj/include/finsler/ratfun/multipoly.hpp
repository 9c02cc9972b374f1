#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "finsler/core/error.hpp"
#include "finsler/core/rational.hpp"

namespace finsler::ratfun {

// Monomials over at most 8 variables are packed into one 64-bit key, one
// byte per exponent. Variable 0 sits in the most significant byte, so a
// plain integer comparison of keys is a lexicographic comparison with base
// variables (which come first) taking priority.
using MonoKey = std::uint64_t;

constexpr int kMaxVars = 8;
constexpr unsigned kMaxExp = 255;

inline unsigned mono_get(MonoKey k, int var) {
    return static_cast<unsigned>((k >> ((kMaxVars - 1 - var) * 8)) & 0xFF);
}

inline MonoKey mono_set(MonoKey k, int var, unsigned e) {
    if (e > kMaxExp) throw OverflowError("monomial exponent exceeds 255");
    const int sh = (kMaxVars - 1 - var) * 8;
    return (k & ~(MonoKey(0xFF) << sh)) | (MonoKey(e) << sh);
}

inline unsigned mono_degree(MonoKey k) {
    unsigned d = 0;
    for (int i = 0; i < kMaxVars; ++i) d += static_cast<unsigned>((k >> (i * 8)) & 0xFF);
    return d;
}

inline MonoKey mono_mul(MonoKey a, MonoKey b) {
    MonoKey r = 0;
    for (int v = 0; v < kMaxVars; ++v) {
        unsigned e = mono_get(a, v) + mono_get(b, v);
        if (e > kMaxExp) throw OverflowError("monomial exponent exceeds 255 in product");
        r = mono_set(r, v, e);
    }
    return r;
}

// a / b, or nullopt when b does not divide a.
inline std::optional<MonoKey> mono_div(MonoKey a, MonoKey b) {
    MonoKey r = 0;
    for (int v = 0; v < kMaxVars; ++v) {
        unsigned ea = mono_get(a, v), eb = mono_get(b, v);
        if (eb > ea) return std::nullopt;
        r = mono_set(r, v, ea - eb);
    }
    return r;
}

// Graded lexicographic order: total degree first, then the packed key.
inline bool mono_less(MonoKey a, MonoKey b) {
    unsigned da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    return a < b;
}

// Exact sparse multivariate polynomial over Q in the chart variables
// x^1..x^n (base) and y^1..y^n (fiber). Terms are kept sorted descending in
// graded-lex order, with no zero coefficients.
class MultiPoly {
  public:
    using Term = std::pair<MonoKey, Rational>;

    MultiPoly() : nb_(0), nf_(0) {}
    MultiPoly(int nvars_base, int nvars_fiber) : nb_(nvars_base), nf_(nvars_fiber) {
        check_shape_();
    }

    static MultiPoly constant(int nb, int nf, Rational c) {
        MultiPoly p(nb, nf);
        if (!rat_is_zero(c)) p.terms_.emplace_back(MonoKey(0), std::move(c));
        return p;
    }

    // var indexes the full chart: 0..nb-1 base, nb..nb+nf-1 fiber.
    static MultiPoly variable(int nb, int nf, int var) {
        MultiPoly p(nb, nf);
        if (var < 0 || var >= nb + nf) throw DomainViolation("variable id out of range");
        p.terms_.emplace_back(mono_set(MonoKey(0), var, 1), Rational(1));
        return p;
    }

    static MultiPoly from_terms(int nb, int nf, std::vector<Term> terms) {
        MultiPoly p(nb, nf);
        p.terms_ = std::move(terms);
        p.normalize_();
        return p;
    }

    int nvars_base() const { return nb_; }
    int nvars_fiber() const { return nf_; }
    int nvars() const { return nb_ + nf_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
    }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    const Term& leading() const {
        if (terms_.empty()) throw DomainViolation("leading term of zero polynomial");
        return terms_.front();
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw DomainViolation("constant_value of non-constant polynomial");
        return terms_[0].second;
    }

    unsigned degree_in(int var) const {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, mono_get(t.first, var));
        return d;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, mono_degree(t.first));
        return d;
    }

    bool depends_on(int var) const {
        for (const auto& t : terms_)
            if (mono_get(t.first, var) != 0) return true;
        return false;
    }

    friend MultiPoly operator-(const MultiPoly& p) {
        MultiPoly r(p.nb_, p.nf_);
        r.terms_.reserve(p.terms_.size());
        for (const auto& t : p.terms_) r.terms_.emplace_back(t.first, -t.second);
        return r;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        a.check_same_(b);
        MultiPoly r(a.nb_, a.nf_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        // merge two descending-sorted term lists
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            const MonoKey ka = a.terms_[i].first, kb = b.terms_[j].first;
            if (ka == kb) {
                Rational c = a.terms_[i].second + b.terms_[j].second;
                if (!rat_is_zero(c)) r.terms_.emplace_back(ka, std::move(c));
                ++i, ++j;
            } else if (mono_less(kb, ka)) {
                r.terms_.push_back(a.terms_[i++]);
            } else {
                r.terms_.push_back(b.terms_[j++]);
            }
        }
        for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
        return r;
    }

    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_same_(b);
        MultiPoly r(a.nb_, a.nf_);
        if (a.is_zero() || b.is_zero()) return r;
        if (a.terms_.size() == 1) return b.mul_term_(a.terms_[0]);
        if (b.terms_.size() == 1) return a.mul_term_(b.terms_[0]);
        std::unordered_map<MonoKey, Rational> acc;
        acc.reserve(a.terms_.size() * 2);
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                MonoKey k = mono_mul(ta.first, tb.first);
                auto it = acc.find(k);
                if (it == acc.end())
                    acc.emplace(k, ta.second * tb.second);
                else
                    it->second += ta.second * tb.second;
            }
        r.terms_.reserve(acc.size());
        for (auto& kv : acc)
            if (!rat_is_zero(kv.second)) r.terms_.emplace_back(kv.first, std::move(kv.second));
        r.sort_();
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    friend MultiPoly operator*(const MultiPoly& p, const Rational& c) {
        MultiPoly r(p.nb_, p.nf_);
        if (rat_is_zero(c)) return r;
        r.terms_.reserve(p.terms_.size());
        for (const auto& t : p.terms_) r.terms_.emplace_back(t.first, t.second * c);
        return r;
    }
    friend MultiPoly operator*(const Rational& c, const MultiPoly& p) { return p * c; }

    MultiPoly pow(unsigned e) const {
        MultiPoly acc = constant(nb_, nf_, Rational(1));
        MultiPoly base = *this;
        while (e) {
            if (e & 1) acc *= base;
            if (e >>= 1) base *= base;
        }
        return acc;
    }

    bool operator==(const MultiPoly& o) const {
        return nb_ == o.nb_ && nf_ == o.nf_ && terms_ == o.terms_;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // Formal partial derivative with respect to one chart variable.
    MultiPoly diff(int var) const {
        if (var < 0 || var >= nvars()) throw DomainViolation("diff: variable id out of range");
        MultiPoly r(nb_, nf_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            unsigned e = mono_get(t.first, var);
            if (e == 0) continue;
            r.terms_.emplace_back(mono_set(t.first, var, e - 1), t.second * Rational(e));
        }
        r.sort_();
        return r;
    }

    // Substitutes rational values for the base variables, leaving a
    // polynomial in the fiber variables only.
    MultiPoly eval_base(const std::vector<Rational>& x) const {
        if (static_cast<int>(x.size()) != nb_) throw DimensionMismatch("eval_base size");
        MultiPoly r(nb_, nf_);
        std::unordered_map<MonoKey, Rational> acc;
        for (const auto& t : terms_) {
            Rational c = t.second;
            MonoKey k = t.first;
            for (int v = 0; v < nb_; ++v) {
                unsigned e = mono_get(k, v);
                if (e) {
                    c *= rat_pow(x[v], e);
                    k = mono_set(k, v, 0);
                }
            }
            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(k, std::move(c));
            else
                it->second += c;
        }
        r.terms_.reserve(acc.size());
        for (auto& kv : acc)
            if (!rat_is_zero(kv.second)) r.terms_.emplace_back(kv.first, std::move(kv.second));
        r.sort_();
        return r;
    }

    Rational eval_exact(const std::vector<Rational>& vals) const {
        if (static_cast<int>(vals.size()) != nvars()) throw DimensionMismatch("eval_exact size");
        Rational acc(0);
        for (const auto& t : terms_) {
            Rational c = t.second;
            for (int v = 0; v < nvars(); ++v) {
                unsigned e = mono_get(t.first, v);
                if (e) c *= rat_pow(vals[v], e);
            }
            acc += c;
        }
        return acc;
    }

    // Evaluates the polynomial in an arbitrary commutative ring: `vals`
    // supplies one ring element per chart variable, `from_rat` embeds Q.
    template <class S, class FromRat>
    S eval_ring(const std::vector<S>& vals, FromRat from_rat) const {
        if (static_cast<int>(vals.size()) != nvars()) throw DimensionMismatch("eval_ring size");
        // memoized powers per variable
        std::vector<std::vector<S>> pw(vals.size());
        S acc = from_rat(Rational(0));
        for (const auto& t : terms_) {
            S term = from_rat(t.second);
            for (int v = 0; v < nvars(); ++v) {
                unsigned e = mono_get(t.first, v);
                if (!e) continue;
                auto& p = pw[v];
                if (p.empty()) p.push_back(vals[v]);
                while (p.size() < e) p.push_back(p.back() * vals[v]);
                term = term * p[e - 1];
            }
            acc = acc + term;
        }
        return acc;
    }

    // Multiplies each term by lam^(fiber degree); this realizes y -> lam*y.
    MultiPoly scale_fiber(const Rational& lam) const {
        MultiPoly r(nb_, nf_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            unsigned d = 0;
            for (int v = nb_; v < nb_ + nf_; ++v) d += mono_get(t.first, v);
            Rational c = t.second * rat_pow(lam, d);
            if (!rat_is_zero(c)) r.terms_.emplace_back(t.first, std::move(c));
        }
        r.sort_();
        return r;
    }

    // Positive rational c such that (*this)/c has coprime integer
    // coefficients. Zero polynomial reports content 1.
    Rational content() const {
        if (terms_.empty()) return Rational(1);
        BigInt den_lcm(1);
        for (const auto& t : terms_) den_lcm = int_lcm(den_lcm, t.second.get_den());
        BigInt num_gcd(0);
        for (const auto& t : terms_) {
            BigInt scaled = t.second.get_num() * (den_lcm / t.second.get_den());
            num_gcd = int_gcd(num_gcd, scaled);
        }
        Rational c(num_gcd, den_lcm);
        c.canonicalize();
        return c;
    }

    MultiPoly divided_by(const Rational& c) const {
        if (rat_is_zero(c)) throw DivisionByZero("division of polynomial by zero scalar");
        return *this * (Rational(1) / c);
    }

    const Term& trailing() const {
        if (terms_.empty()) throw DomainViolation("trailing term of zero polynomial");
        return terms_.back();
    }

    // Exact polynomial division; nullopt when b does not divide *this.
    // Leading and trailing monomials fail fast; the remainder lives in an
    // ordered map so each elimination step costs |b| log |rem|.
    std::optional<MultiPoly> exact_divide(const MultiPoly& b) const {
        check_same_(b);
        if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
        if (is_zero()) return MultiPoly(nb_, nf_);
        const Term& lb = b.leading();
        if (!mono_div(leading().first, lb.first)) return std::nullopt;
        if (!mono_div(trailing().first, b.trailing().first)) return std::nullopt;

        struct DescCmp {
            bool operator()(MonoKey a, MonoKey b) const { return mono_less(b, a); }
        };
        std::map<MonoKey, Rational, DescCmp> rem;
        for (const auto& t : terms_) rem.emplace(t.first, t.second);
        MultiPoly quot(nb_, nf_);
        while (!rem.empty()) {
            auto lead = rem.begin();
            auto k = mono_div(lead->first, lb.first);
            if (!k) return std::nullopt;
            Rational qc = lead->second / lb.second;
            for (const auto& tb : b.terms_) {
                MonoKey key = mono_mul(*k, tb.first);
                auto it = rem.find(key);
                if (it == rem.end()) {
                    rem.emplace(key, -(qc * tb.second));
                } else {
                    it->second -= qc * tb.second;
                    if (rat_is_zero(it->second)) rem.erase(it);
                }
            }
            quot.terms_.emplace_back(*k, std::move(qc));
        }
        quot.sort_();
        return quot;
    }

    // Exact polynomial square root by leading-coefficient matching.
    std::optional<MultiPoly> sqrt_exact() const {
        if (is_zero()) return MultiPoly(nb_, nf_);
        const Term& lt = leading();
        MonoKey rk = 0;
        for (int v = 0; v < nvars(); ++v) {
            unsigned e = mono_get(lt.first, v);
            if (e % 2) return std::nullopt;
            rk = mono_set(rk, v, e / 2);
        }
        Rational rc;
        if (!rat_sqrt_exact(lt.second, rc)) return std::nullopt;
        MultiPoly root(nb_, nf_);
        root.terms_.emplace_back(rk, rc);
        MultiPoly rem = *this - root * root;
        Rational two_rc = Rational(2) * rc;
        std::size_t guard = 4 * terms_.size() + 16;
        while (!rem.is_zero()) {
            if (guard-- == 0) return std::nullopt;
            const Term& lr = rem.leading();
            if (!mono_less(lr.first, lt.first) && lr.first != lt.first) return std::nullopt;
            auto k = mono_div(lr.first, rk);
            if (!k) return std::nullopt;
            MultiPoly u(nb_, nf_);
            u.terms_.emplace_back(*k, lr.second / two_rc);
            // next remainder: p - (root+u)^2 = rem - 2*root*u - u^2
            rem = rem - Rational(2) * (root * u) - u * u;
            root += u;
        }
        return root;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            Rational c = t.second;
            if (!first) {
                os << (sgn(c) < 0 ? " - " : " + ");
                if (sgn(c) < 0) c = -c;
            }
            first = false;
            bool has_vars = t.first != 0;
            if (!has_vars || c != 1) {
                os << rat_to_string(c);
                if (has_vars) os << "*";
            }
            bool first_var = true;
            for (int v = 0; v < nvars(); ++v) {
                unsigned e = mono_get(t.first, v);
                if (!e) continue;
                if (!first_var) os << "*";
                first_var = false;
                if (v < nb_)
                    os << "x" << (v + 1);
                else
                    os << "y" << (v - nb_ + 1);
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

  private:
    void check_shape_() const {
        if (nb_ < 0 || nf_ < 0 || nb_ + nf_ > kMaxVars)
            throw OverflowError("polynomial supports at most 8 chart variables");
    }
    void check_same_(const MultiPoly& o) const {
        if (nb_ != o.nb_ || nf_ != o.nf_)
            throw DimensionMismatch("polynomials over different variable sets");
    }
    MultiPoly mul_term_(const Term& t) const {
        MultiPoly r(nb_, nf_);
        if (rat_is_zero(t.second)) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& a : terms_)
            r.terms_.emplace_back(mono_mul(a.first, t.first), a.second * t.second);
        // multiplying by a monomial preserves the ordering
        return r;
    }
    void sort_() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& a, const Term& b) { return mono_less(b.first, a.first); });
    }
    void normalize_() {
        sort_();
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().first == t.first)
                out.back().second += t.second;
            else
                out.push_back(std::move(t));
        }
        terms_.clear();
        for (auto& t : out)
            if (!rat_is_zero(t.second)) terms_.push_back(std::move(t));
    }

    int nb_, nf_;
    std::vector<Term> terms_;
};

} // namespace finsler::ratfun
