/**
 * Dense exact linear algebra over an ordered field.
 *
 * Eigen supplies storage and expression arithmetic; the eliminations here are
 * written out because Eigen's decompositions choose pivots by magnitude
 * thresholds, which has no meaning for exact scalars.
 */
#ifndef CONERISK_LINALG_HPP
#define CONERISK_LINALG_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "conerisk/field.hpp"

namespace conerisk {

using Index = Eigen::Index;

template <typename F> using Vec = Eigen::Matrix<F, Eigen::Dynamic, 1>;
template <typename F> using Mat = Eigen::Matrix<F, Eigen::Dynamic, Eigen::Dynamic>;

/** Reduced row echelon form in place; returns the pivot columns in order. */
template <typename F>
std::vector<Index> rref(Mat<F>& a);

template <typename F>
Index rank(Mat<F> a);

/** Basis of {x : A x = 0}, one basis vector per row of the result. */
template <typename F>
Mat<F> nullspace(const Mat<F>& a);

/** Some solution of A x = b, or nothing when the system is inconsistent. */
template <typename F>
std::optional<Vec<F>> solve(const Mat<F>& a, const Vec<F>& b);

/**
 * Divides by the absolute value of the first nonzero entry, so that entry
 * becomes +-1.  Zero vectors are left alone.
 */
template <typename F>
void canonicalize(Eigen::Ref<Vec<F>> v);

template <typename F>
Vec<F> canonical(Vec<F> v)
{
    canonicalize<F>(v);
    return v;
}

template <typename F>
bool is_zero_vec(const Vec<F>& v)
{
    for (Index i = 0; i < v.size(); ++i)
        if (!is_zero(v(i))) return false;
    return true;
}

/** Strict lexicographic order on equal-length vectors (real order per entry). */
template <typename F>
bool lex_less(const Vec<F>& x, const Vec<F>& y)
{
    for (Index i = 0; i < x.size(); ++i) {
        int s = sign(F(x(i) - y(i)));
        if (s != 0) return s < 0;
    }
    return false;
}

/** Stacks row vectors into a matrix with `cols` columns (cols needed when empty). */
template <typename F>
Mat<F> stack_rows(const std::vector<Vec<F>>& rows, Index cols)
{
    Mat<F> m(static_cast<Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        m.row(static_cast<Index>(i)) = rows[i].transpose();
    return m;
}

template <typename F>
std::vector<Vec<F>> unstack_rows(const Mat<F>& m)
{
    std::vector<Vec<F>> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
    return out;
}

template <typename F>
std::string format_vec(const Vec<F>& v)
{
    std::string s = "(";
    for (Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_scalar(v(i));
    }
    return s + ")";
}

}   // namespace conerisk

#endif
