#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "finsler/core/error.hpp"

namespace finsler::autodiff {

// Truncation orders of the numeric backend: 2 in the base (x) directions
// and 4 in the fiber (y) directions. The deepest consumer in the curvature
// tower needs one x-derivative of objects built from three y-derivatives of
// the spray, which (2,4) covers when the spray is seeded from its closed
// form.
constexpr int kMaxOrderX = 2;
constexpr int kMaxOrderY = 4;

namespace detail {

using Expo = std::vector<std::uint8_t>;

inline std::uint64_t pack(const Expo& e) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < e.size(); ++i) k |= std::uint64_t(e[i]) << (i * 5);
    return k;
}

// all multi-indices over n variables with total degree <= maxdeg,
// ordered by degree then lexicographically
inline std::vector<Expo> enumerate(int n, int maxdeg) {
    std::vector<Expo> out;
    Expo cur(n, 0);
    for (int d = 0; d <= maxdeg; ++d) {
        auto recd = [&](auto&& self, int pos, int left) -> void {
            if (pos == n - 1) {
                cur[pos] = static_cast<std::uint8_t>(left);
                out.push_back(cur);
                cur[pos] = 0;
                return;
            }
            for (int e = 0; e <= left; ++e) {
                cur[pos] = static_cast<std::uint8_t>(e);
                self(self, pos + 1, left - e);
            }
            cur[pos] = 0;
        };
        recd(recd, 0, d);
    }
    return out;
}

inline int degree(const Expo& e) {
    int d = 0;
    for (auto v : e) d += v;
    return d;
}

// Precomputed index structure shared by every jet of one dimension.
struct JetTable {
    int n = 0;
    std::vector<Expo> xs, ys;
    int nx = 0, ny = 0;
    std::vector<int> xdeg, ydeg;
    std::unordered_map<std::uint64_t, int> xpos, ypos;
    struct Pair {
        int a, b, t;
    };
    std::vector<Pair> xpairs, ypairs; // ordered pairs with in-range sums
    // shift tables per variable: (target, source, factor)
    struct Shift {
        int t, s;
        double f;
    };
    std::vector<std::vector<Shift>> dx, dy;
    std::vector<double> xfact, yfact; // kappa! per index

    explicit JetTable(int n_) : n(n_) {
        xs = enumerate(n, kMaxOrderX);
        ys = enumerate(n, kMaxOrderY);
        nx = static_cast<int>(xs.size());
        ny = static_cast<int>(ys.size());
        for (int i = 0; i < nx; ++i) {
            xpos[pack(xs[i])] = i;
            xdeg.push_back(degree(xs[i]));
        }
        for (int i = 0; i < ny; ++i) {
            ypos[pack(ys[i])] = i;
            ydeg.push_back(degree(ys[i]));
        }
        auto build_pairs = [](const std::vector<Expo>& idx, int maxdeg,
                              const std::unordered_map<std::uint64_t, int>& pos,
                              std::vector<Pair>& out) {
            const int m = static_cast<int>(idx.size());
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    if (degree(idx[a]) + degree(idx[b]) > maxdeg) continue;
                    Expo s = idx[a];
                    for (std::size_t k = 0; k < s.size(); ++k)
                        s[k] = static_cast<std::uint8_t>(s[k] + idx[b][k]);
                    out.push_back({a, b, pos.at(pack(s))});
                }
        };
        build_pairs(xs, kMaxOrderX, xpos, xpairs);
        build_pairs(ys, kMaxOrderY, ypos, ypairs);

        auto build_shift = [](const std::vector<Expo>& idx,
                              const std::unordered_map<std::uint64_t, int>& pos, int n_,
                              std::vector<std::vector<Shift>>& out) {
            out.assign(n_, {});
            const int m = static_cast<int>(idx.size());
            for (int v = 0; v < n_; ++v)
                for (int t = 0; t < m; ++t) {
                    Expo s = idx[t];
                    s[v] = static_cast<std::uint8_t>(s[v] + 1);
                    auto it = pos.find(pack(s));
                    if (it == pos.end()) continue;
                    out[v].push_back({t, it->second, double(idx[t][v] + 1)});
                }
        };
        build_shift(xs, xpos, n, dx);
        build_shift(ys, ypos, n, dy);

        auto fact = [](const Expo& e) {
            double f = 1;
            for (auto v : e)
                for (int k = 2; k <= v; ++k) f *= k;
            return f;
        };
        for (auto& e : xs) xfact.push_back(fact(e));
        for (auto& e : ys) yfact.push_back(fact(e));
    }
};

inline const JetTable& table(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<JetTable>> reg;
    std::scoped_lock lock(mu);
    auto& slot = reg[n];
    if (!slot) {
        if (n < 1 || n > 10) throw DimensionMismatch("jet dimension out of supported range");
        slot = std::make_unique<JetTable>(n);
    }
    return *slot;
}

} // namespace detail

// Numeric truncated-Taylor scalar over one chart point: carries every mixed
// partial derivative up to order 2 in x and order 4 in y as Taylor
// coefficients (that is, derivative / kappa!). ox/oy track how many orders
// are still trustworthy after differentiation; reads past them throw.
class Jet {
  public:
    Jet() = default;

    static Jet constant(int n, double v) {
        Jet j(n);
        j.c_[0] = v;
        return j;
    }

    // coordinate seed: base variable i
    static Jet seed_x(int n, int i, double v) {
        Jet j(n);
        j.c_[0] = v;
        detail::Expo e(n, 0);
        e[i] = 1;
        j.c_[j.idx_(j.tab_->xpos.at(detail::pack(e)), 0)] = 1.0;
        return j;
    }

    // coordinate seed: fiber variable i
    static Jet seed_y(int n, int i, double v) {
        Jet j(n);
        j.c_[0] = v;
        detail::Expo e(n, 0);
        e[i] = 1;
        j.c_[j.idx_(0, j.tab_->ypos.at(detail::pack(e)))] = 1.0;
        return j;
    }

    int dim() const { return n_; }
    int order_x() const { return ox_; }
    int order_y() const { return oy_; }
    double value() const { return c_[0]; }

    // mixed partial derivative by explicit multi-indices (kx over x, ky over y)
    double deriv(const std::vector<int>& kx, const std::vector<int>& ky) const {
        detail::Expo ex(kx.begin(), kx.end()), ey(ky.begin(), ky.end());
        int dx = detail::degree(ex), dy = detail::degree(ey);
        if (dx > ox_ || dy > oy_)
            throw OrderExhausted("derivative order beyond jet validity");
        auto xit = tab_->xpos.find(detail::pack(ex));
        auto yit = tab_->ypos.find(detail::pack(ey));
        if (xit == tab_->xpos.end() || yit == tab_->ypos.end())
            throw OrderExhausted("derivative order beyond jet truncation");
        return c_[idx_(xit->second, yit->second)] * tab_->xfact[xit->second] *
               tab_->yfact[yit->second];
    }

    double dvalue_x(int i) const { return deriv(unit_(i), std::vector<int>(n_, 0)); }
    double dvalue_y(int i) const { return deriv(std::vector<int>(n_, 0), unit_(i)); }

    friend Jet operator-(const Jet& a) {
        Jet r = a;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        a.check_(b);
        Jet r = a;
        r.ox_ = std::min(a.ox_, b.ox_);
        r.oy_ = std::min(a.oy_, b.oy_);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        r.clear_invalid_();
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_(b);
        Jet r(a.n_);
        r.ox_ = std::min(a.ox_, b.ox_);
        r.oy_ = std::min(a.oy_, b.oy_);
        const auto& T = *a.tab_;
        const int ny = T.ny;
        for (const auto& xp : T.xpairs) {
            const double* pa = a.c_.data() + xp.a * ny;
            const double* pb = b.c_.data() + xp.b * ny;
            double* pt = r.c_.data() + xp.t * ny;
            for (const auto& yp : T.ypairs) pt[yp.t] += pa[yp.a] * pb[yp.b];
        }
        r.clear_invalid_();
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.inverse(); }

    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend Jet operator+(const Jet& a, double s) {
        Jet r = a;
        r.c_[0] += s;
        return r;
    }
    friend Jet operator+(double s, const Jet& a) { return a + s; }
    friend Jet operator-(const Jet& a, double s) { return a + (-s); }
    friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(const Jet& a, double s) {
        Jet r = a;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    friend Jet operator*(double s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
    friend Jet operator/(double s, const Jet& a) { return a.inverse() * s; }

    Jet inverse() const {
        if (c_[0] == 0.0) throw DivisionByZero("jet inverse with zero value");
        // 1/f = (1/f0) * sum_k u^k with u = 1 - f/f0 nilpotent
        Jet u = constant(n_, 1.0) - *this * (1.0 / c_[0]);
        u.ox_ = ox_;
        u.oy_ = oy_;
        Jet acc = constant(n_, 1.0);
        acc.ox_ = ox_;
        acc.oy_ = oy_;
        Jet pw = u;
        for (int k = 1; k <= kMaxOrderX + kMaxOrderY; ++k) {
            acc += pw;
            if (k < kMaxOrderX + kMaxOrderY) pw *= u;
        }
        return acc * (1.0 / c_[0]);
    }

    // Formal partial derivative fields; each consumes one order of validity.
    Jet dx(int i) const {
        if (ox_ == 0) throw OrderExhausted("x-derivative beyond jet validity");
        Jet r(n_);
        r.ox_ = ox_ - 1;
        r.oy_ = oy_;
        const auto& T = *tab_;
        for (const auto& sh : T.dx[i]) {
            const double* ps = c_.data() + sh.s * T.ny;
            double* pt = r.c_.data() + sh.t * T.ny;
            for (int y = 0; y < T.ny; ++y) pt[y] = ps[y] * sh.f;
        }
        r.clear_invalid_();
        return r;
    }

    Jet dy(int i) const {
        if (oy_ == 0) throw OrderExhausted("y-derivative beyond jet validity");
        Jet r(n_);
        r.ox_ = ox_;
        r.oy_ = oy_ - 1;
        const auto& T = *tab_;
        for (const auto& sh : T.dy[i])
            for (int x = 0; x < T.nx; ++x)
                r.c_[x * T.ny + sh.t] = c_[x * T.ny + sh.s] * sh.f;
        r.clear_invalid_();
        return r;
    }

    // f^e by the generalized binomial series around the value slot.
    Jet pow(double e) const {
        double whole;
        const bool integral = std::modf(e, &whole) == 0.0 && std::abs(e) < 64;
        if (c_[0] <= 0.0) {
            if (!integral)
                throw DomainViolation("jet pow: non-integer exponent with nonpositive value");
            return pow_int_(static_cast<long>(whole));
        }
        if (integral && whole == 0.0) return constant(n_, 1.0);
        // f^e = f0^e * sum_k C(e,k) u^k, u = f/f0 - 1
        Jet u = *this * (1.0 / c_[0]) - 1.0;
        u.ox_ = ox_;
        u.oy_ = oy_;
        Jet acc = constant(n_, 1.0);
        acc.ox_ = ox_;
        acc.oy_ = oy_;
        Jet pw = u;
        double binom = 1.0;
        for (int k = 1; k <= kMaxOrderX + kMaxOrderY; ++k) {
            binom *= (e - (k - 1)) / k;
            acc += pw * binom;
            if (k < kMaxOrderX + kMaxOrderY) pw *= u;
        }
        return acc * std::pow(c_[0], e);
    }

    Jet sqrt() const {
        if (c_[0] <= 0.0) throw DomainViolation("jet sqrt of nonpositive value");
        return pow(0.5);
    }

    Jet log() const {
        if (c_[0] <= 0.0) throw DomainViolation("jet log of nonpositive value");
        Jet u = *this * (1.0 / c_[0]) - 1.0;
        u.ox_ = ox_;
        u.oy_ = oy_;
        Jet acc = constant(n_, std::log(c_[0]));
        acc.ox_ = ox_;
        acc.oy_ = oy_;
        Jet pw = u;
        for (int k = 1; k <= kMaxOrderX + kMaxOrderY; ++k) {
            acc += pw * ((k % 2 ? 1.0 : -1.0) / k);
            if (k < kMaxOrderX + kMaxOrderY) pw *= u;
        }
        return acc;
    }

    Jet exp() const {
        Jet u = *this - c_[0];
        u.ox_ = ox_;
        u.oy_ = oy_;
        Jet acc = constant(n_, 1.0);
        acc.ox_ = ox_;
        acc.oy_ = oy_;
        Jet pw = u;
        double fact = 1.0;
        for (int k = 1; k <= kMaxOrderX + kMaxOrderY; ++k) {
            fact /= k;
            acc += pw * fact;
            if (k < kMaxOrderX + kMaxOrderY) pw *= u;
        }
        return acc * std::exp(c_[0]);
    }

  private:
    explicit Jet(int n) : n_(n), tab_(&detail::table(n)) {
        c_.assign(std::size_t(tab_->nx) * tab_->ny, 0.0);
    }

    Jet pow_int_(long e) const {
        if (e < 0) return inverse().pow_int_(-e);
        Jet acc = constant(n_, 1.0);
        acc.ox_ = ox_;
        acc.oy_ = oy_;
        Jet base = *this;
        while (e) {
            if (e & 1) acc *= base;
            if (e >>= 1) base *= base;
        }
        return acc;
    }

    std::vector<int> unit_(int i) const {
        std::vector<int> u(n_, 0);
        u[i] = 1;
        return u;
    }

    std::size_t idx_(int x, int y) const { return std::size_t(x) * tab_->ny + y; }

    void check_(const Jet& o) const {
        if (n_ != o.n_) throw DimensionMismatch("jets of different dimension");
    }

    // zero every slot beyond the current validity so stale coefficients
    // can never leak into later reads
    void clear_invalid_() {
        if (ox_ == kMaxOrderX && oy_ == kMaxOrderY) return;
        const auto& T = *tab_;
        for (int x = 0; x < T.nx; ++x) {
            if (T.xdeg[x] > ox_) {
                std::fill_n(c_.data() + std::size_t(x) * T.ny, T.ny, 0.0);
                continue;
            }
            for (int y = 0; y < T.ny; ++y)
                if (T.ydeg[y] > oy_) c_[std::size_t(x) * T.ny + y] = 0.0;
        }
    }

    int n_ = 0;
    int ox_ = kMaxOrderX, oy_ = kMaxOrderY;
    const detail::JetTable* tab_ = nullptr;
    std::vector<double> c_;
};

inline Jet pow(const Jet& j, double e) { return j.pow(e); }
inline Jet sqrt(const Jet& j) { return j.sqrt(); }
inline Jet log(const Jet& j) { return j.log(); }
inline Jet exp(const Jet& j) { return j.exp(); }

// One point of the slit tangent bundle. Conic-domain validation happens
// where the metric is known, at evaluation-frame construction.
struct EvalPoint {
    std::vector<double> x, y;
};

} // namespace finsler::autodiff
