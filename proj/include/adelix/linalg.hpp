#pragma once
#include <vector>

#include "adelix/laurent.hpp"

namespace adelix {

/* Dense exact linear algebra over a field-like K (Fp, Rational). Matrices
 * are row-major vectors of rows. Everything goes through one row-reduction
 * routine; pivots are the first non-zeroish entry of a column.
 */
template <class K>
using Mat = std::vector<std::vector<K>>;

template <class K>
struct Rref {
    Mat<K> m;
    std::vector<long> pivot_cols;
    long rank() const { return (long)pivot_cols.size(); }
};

template <class K>
Rref<K> row_reduce(Mat<K> a) {
    Rref<K> out;
    if (a.empty()) {
        out.m = std::move(a);
        return out;
    }
    size_t rows = a.size(), cols = a[0].size();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pr = rows;
        for (size_t r = row; r < rows; ++r)
            if (!zeroish(a[r][col])) {
                pr = r;
                break;
            }
        if (pr == rows) continue;
        std::swap(a[row], a[pr]);
        K pi = ring_inv(a[row][col]);
        for (size_t j = col; j < cols; ++j) a[row][j] = pi * a[row][j];
        for (size_t r = 0; r < rows; ++r) {
            if (r == row) continue;
            K f = a[r][col];
            if (exact_zero(f)) continue;
            for (size_t j = col; j < cols; ++j) a[r][j] = a[r][j] - f * a[row][j];
        }
        out.pivot_cols.push_back((long)col);
        ++row;
    }
    out.m = std::move(a);
    return out;
}

template <class K>
long mat_rank(const Mat<K>& a) {
    return row_reduce(a).rank();
}

// Basis of the right kernel {x : A x = 0}. The unit of K is passed in since
// a default-constructed K is the context-free zero.
template <class K>
Mat<K> kernel_basis(const Mat<K>& a, size_t cols, const K& one) {
    Rref<K> r = row_reduce(a);
    std::vector<bool> is_pivot(cols, false);
    for (long c : r.pivot_cols) is_pivot[(size_t)c] = true;
    Mat<K> basis;
    // one kernel vector per free column: x_free = 1, pivots solve backwards
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<K> v(cols, K{});
        v[fc] = one;
        for (size_t pr = 0; pr < r.pivot_cols.size(); ++pr) {
            size_t pc = (size_t)r.pivot_cols[pr];
            if (pc < cols && fc < r.m[pr].size()) v[pc] = -r.m[pr][fc];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace adelix
