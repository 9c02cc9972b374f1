#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "finsler/backend/numeric.hpp"
#include "finsler/geometry/metric_spec.hpp"

namespace finsler::geometry {

using autodiff::EvalPoint;
using backend::NumericFrame;

struct SampleSpec {
    std::uint64_t seed = 1;
    int count = 32;
    // cone hints for rejection sampling
    bool beta_positive = true;
    int sigma = 0; // 0: fix to the first accepted point's sign
    double x_box = 0.5; // base coordinates drawn uniformly from [-x_box, x_box]
    std::vector<double> x_fixed; // nonempty: sample y only, at this base point
    std::uint64_t max_draws = 200'000;
};

// Seed-deterministic rejection sampler over the conic domain. Points that
// fail the frame invariants (beta != 0, alpha^2 != 0, md > 0, phi' != 0)
// are rejected; the sign of alpha^2 is pinned across one batch so a sweep
// never mixes cones.
inline std::vector<EvalPoint> sample_conic_points(const MetricSpec& spec, SampleSpec ss) {
    const int n = spec.n;
    std::mt19937_64 rng(ss.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> ubox(-ss.x_box, ss.x_box);
    std::vector<EvalPoint> out;
    int sigma = ss.sigma;
    for (std::uint64_t d = 0; d < ss.max_draws && static_cast<int>(out.size()) < ss.count;
         ++d) {
        EvalPoint at;
        if (!ss.x_fixed.empty()) {
            at.x = ss.x_fixed;
        } else {
            at.x.resize(n);
            for (auto& v : at.x) v = ubox(rng);
        }
        at.y.resize(n);
        for (auto& v : at.y) v = gauss(rng);
        try {
            NumericFrame probe(spec, at, Tolerance{}, sigma);
            if (ss.beta_positive) {
                double beta = 0;
                for (int i = 0; i < n; ++i) beta += probe.b()[i].value() * at.y[i];
                if (beta <= 0) continue;
            }
            if (sigma == 0) sigma = probe.sigma();
            out.push_back(std::move(at));
        } catch (const Error&) {
            continue;
        }
    }
    if (static_cast<int>(out.size()) < ss.count)
        throw EmptyCone("rejection sampling found only " + std::to_string(out.size()) +
                        " of " + std::to_string(ss.count) + " admissible points");
    return out;
}

} // namespace finsler::geometry
