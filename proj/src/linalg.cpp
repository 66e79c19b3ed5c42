#include "conerisk/linalg.hpp"

namespace conerisk {

template <typename F>
std::vector<Index> rref(Mat<F>& a)
{
    std::vector<Index> pivots;
    Index row = 0;
    for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Index p = row;
        while (p < a.rows() && is_zero(a(p, col))) ++p;
        if (p == a.rows()) continue;
        if (p != row) a.row(p).swap(a.row(row));
        F inv = F(1) / a(row, col);
        for (Index j = col; j < a.cols(); ++j)
            if (!is_zero(a(row, j))) a(row, j) *= inv;
        for (Index i = 0; i < a.rows(); ++i) {
            if (i == row || is_zero(a(i, col))) continue;
            F f = a(i, col);
            for (Index j = col; j < a.cols(); ++j)
                if (!is_zero(a(row, j))) a(i, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <typename F>
Index rank(Mat<F> a)
{
    return static_cast<Index>(rref<F>(a).size());
}

template <typename F>
Mat<F> nullspace(const Mat<F>& a)
{
    Mat<F> r = a;
    auto pivots = rref<F>(r);
    std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
    for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Vec<F>> basis;
    for (Index free = 0; free < a.cols(); ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        Vec<F> v = Vec<F>::Zero(a.cols());
        v(free) = F(1);
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v(pivots[k]) = -r(static_cast<Index>(k), free);
        basis.push_back(std::move(v));
    }
    return stack_rows<F>(basis, a.cols());
}

template <typename F>
std::optional<Vec<F>> solve(const Mat<F>& a, const Vec<F>& b)
{
    Mat<F> aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    auto pivots = rref<F>(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    Vec<F> x = Vec<F>::Zero(a.cols());
    for (std::size_t k = 0; k < pivots.size(); ++k)
        x(pivots[k]) = aug(static_cast<Index>(k), a.cols());
    return x;
}

template <typename F>
void canonicalize(Eigen::Ref<Vec<F>> v)
{
    for (Index i = 0; i < v.size(); ++i) {
        int s = sign(v(i));
        if (s == 0) continue;
        F scale = s > 0 ? F(v(i)) : F(-v(i));
        if (scale == F(1)) return;
        for (Index j = i; j < v.size(); ++j)
            if (!is_zero(v(j))) v(j) /= scale;
        return;
    }
}

#define CONERISK_INSTANTIATE(F)                                              \
    template std::vector<Index> rref<F>(Mat<F>&);                            \
    template Index rank<F>(Mat<F>);                                          \
    template Mat<F> nullspace<F>(const Mat<F>&);                             \
    template std::optional<Vec<F>> solve<F>(const Mat<F>&, const Vec<F>&);   \
    template void canonicalize<F>(Eigen::Ref<Vec<F>>);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
