#pragma once

#include <vector>

#include "finsler/core/error.hpp"

namespace finsler::geometry {

template <class S>
using Vec = std::vector<S>;
template <class S>
using Mat = std::vector<std::vector<S>>;
template <class S>
using T3 = std::vector<Mat<S>>;
template <class S>
using T4 = std::vector<T3<S>>;

template <class S>
Mat<S> make_mat(int n, const S& fill) {
    return Mat<S>(n, Vec<S>(n, fill));
}
template <class S>
T3<S> make_t3(int n, const S& fill) {
    return T3<S>(n, make_mat(n, fill));
}
template <class S>
T4<S> make_t4(int n, const S& fill) {
    return T4<S>(n, make_t3(n, fill));
}

// Determinant over any commutative ring, by cofactor expansion; fine for
// the n <= 4 charts this engine works in.
template <class S>
S ring_det(const Mat<S>& m) {
    const int n = static_cast<int>(m.size());
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    S acc = m[0][0] - m[0][0]; // zero of the ring
    for (int j = 0; j < n; ++j) {
        Mat<S> minor;
        minor.reserve(n - 1);
        for (int r = 1; r < n; ++r) {
            Vec<S> row;
            row.reserve(n - 1);
            for (int c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        S term = m[0][j] * ring_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Adjugate (transposed cofactor matrix): m * adj(m) = det(m) * Id.
template <class S>
Mat<S> ring_adjugate(const Mat<S>& m) {
    const int n = static_cast<int>(m.size());
    Mat<S> adj = make_mat(n, m[0][0] - m[0][0]);
    if (n == 1) {
        adj[0][0] = m[0][0] / m[0][0]; // 1
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat<S> minor;
            minor.reserve(n - 1);
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                Vec<S> row;
                row.reserve(n - 1);
                for (int c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            S cof = ring_det(minor);
            adj[j][i] = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

template <class S>
Mat<S> ring_inverse(const Mat<S>& m, const S& det) {
    const int n = static_cast<int>(m.size());
    Mat<S> adj = ring_adjugate(m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adj[i][j] = adj[i][j] / det;
    return adj;
}

} // namespace finsler::geometry
