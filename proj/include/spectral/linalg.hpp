#ifndef SPECTRAL_LINALG_HPP
#define SPECTRAL_LINALG_HPP

#include "scalar.hpp"

#include <vector>

namespace spectral {

template <class K>
using Mat = std::vector<std::vector<K>>;

template <class K>
Mat<K> mat_identity(int n) {
    Mat<K> r(std::size_t(n), std::vector<K>(std::size_t(n), K(0)));
    for (int i = 0; i < n; ++i) r[std::size_t(i)][std::size_t(i)] = K(1);
    return r;
}

template <class K>
Mat<K> mat_mul(const Mat<K>& a, const Mat<K>& b) {
    std::size_t n = a.size(), m = b[0].size(), l = b.size();
    Mat<K> r(n, std::vector<K>(m, K(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < l; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

// Solve A X = B by Gaussian elimination (K a field); throws on singular A.
template <class K>
Mat<K> mat_solve(Mat<K> a, Mat<K> b) {
    std::size_t n = a.size(), m = b[0].size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && !Ring<K>::is_unit(a[piv][col])) ++piv;
        if (piv == n) throw singular_jacobian_error("singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        K d = K(1) / a[col][col];
        for (std::size_t j = 0; j < n; ++j) a[col][j] *= d;
        for (std::size_t j = 0; j < m; ++j) b[col][j] *= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            K f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) a[r][j] -= f * a[col][j];
            for (std::size_t j = 0; j < m; ++j) b[r][j] -= f * b[col][j];
        }
    }
    return b;
}

template <class K>
Mat<K> mat_inverse(const Mat<K>& a) {
    return mat_solve(a, mat_identity<K>(int(a.size())));
}

}

#endif
