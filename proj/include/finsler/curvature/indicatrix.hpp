#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "finsler/backend/numeric.hpp"
#include "finsler/curvature/scalars.hpp"

namespace finsler::curvature {

using backend::NumericFrame;
using geometry::MetricSpec;

struct IndicatrixEstimate {
    double mean = 0;
    double std_error = 0;
    int accepted = 0;
    std::uint64_t draws = 0;
};

struct ConeHints {
    bool beta_positive = true; // restrict to the beta > 0 subcone
    int sigma = 0;             // 0: accept either sign of alpha^2
    std::uint64_t max_draws = 1'000'000;
};

// Monte-Carlo mean of Ric over the indicatrix {F = 1} at a fixed base
// point: directions are drawn uniformly on the unit sphere, rejected
// against the admissible cone and rescaled by 1-homogeneity to F = 1. The
// sampling measure is uniform over accepted directions, an approximation
// documented as such; a user-supplied constant can replace the estimate in
// the Chen-Shen residual. Samples are partitioned into fixed chunks with
// per-chunk seeded substreams merged in chunk order, so the estimate is
// bit-identical for one seed regardless of how chunks are scheduled.
inline IndicatrixEstimate indicatrix_average(
    const MetricSpec& spec, const std::vector<double>& x, std::uint64_t seed, int n_samples,
    const std::function<double(const autodiff::EvalPoint&)>& ric_override = nullptr,
    ConeHints hints = {}) {
    const int n = spec.n;
    if (static_cast<int>(x.size()) != n)
        throw DimensionMismatch("base point dimension mismatch");
    if (n_samples <= 0) throw DomainViolation("n_samples must be positive");

    constexpr int kChunk = 64;
    const int n_chunks = (n_samples + kChunk - 1) / kChunk;
    const std::uint64_t draw_budget = hints.max_draws / static_cast<std::uint64_t>(n_chunks);

    std::vector<double> values;
    values.reserve(n_samples);
    std::uint64_t total_draws = 0;

    auto ric_at = [&](const autodiff::EvalPoint& at) -> double {
        if (ric_override) return ric_override(at);
        NumericFrame fr(spec, at, Tolerance{}, hints.sigma);
        auto ft = geometry::fundamental_tensors(fr);
        auto sp = spray(fr, ft);
        return ricci_scalar(fr, sp).value();
    };

    for (int chunk = 0; chunk < n_chunks && static_cast<int>(values.size()) < n_samples;
         ++chunk) {
        std::seed_seq sseq{seed, static_cast<std::uint64_t>(chunk)};
        std::mt19937_64 rng(sseq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const int quota =
            std::min(kChunk, n_samples - static_cast<int>(values.size()));
        int got = 0;
        for (std::uint64_t d = 0; d < draw_budget && got < quota; ++d) {
            ++total_draws;
            std::vector<double> y(n);
            double norm = 0;
            for (int i = 0; i < n; ++i) {
                y[i] = gauss(rng);
                norm += y[i] * y[i];
            }
            norm = std::sqrt(norm);
            if (norm == 0) continue;
            for (int i = 0; i < n; ++i) y[i] /= norm;
            try {
                autodiff::EvalPoint at{x, y};
                NumericFrame probe(spec, at, Tolerance{}, hints.sigma);
                double beta = 0;
                for (int i = 0; i < n; ++i) beta += probe.b()[i].value() * y[i];
                if (hints.beta_positive && beta <= 0) continue;
                auto ft = geometry::fundamental_tensors(probe);
                double F = ft.F.value();
                if (!(F > 0) || !std::isfinite(F)) continue;
                std::vector<double> ys(n);
                for (int i = 0; i < n; ++i) ys[i] = y[i] / F;
                values.push_back(ric_at({x, ys}));
                ++got;
            } catch (const Error&) {
                continue; // outside the cone or singular: reject
            }
        }
    }

    if (values.empty())
        throw EmptyCone("no admissible directions found in " + std::to_string(total_draws) +
                        " draws");
    IndicatrixEstimate est;
    est.accepted = static_cast<int>(values.size());
    est.draws = total_draws;
    double sum = 0;
    for (double v : values) sum += v;
    est.mean = sum / est.accepted;
    if (est.accepted > 1) {
        double ss = 0;
        for (double v : values) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / (double(est.accepted) * (est.accepted - 1)));
    }
    return est;
}

} // namespace finsler::curvature
