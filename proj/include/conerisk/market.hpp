/**
 * Numeraires, portfolio cones D(V) = {Y : Y.V in D} and the one-period
 * slices K_t(A, V) of acceptable, F_{t+1}-measurable portfolios.
 *
 * Portfolios are width d+1 random vectors flattened component-major (see
 * space.hpp), so a portfolio cone lives in F^{n(d+1)}.
 */
#ifndef CONERISK_MARKET_HPP
#define CONERISK_MARKET_HPP

#include "conerisk/cone.hpp"
#include "conerisk/risk.hpp"
#include "conerisk/space.hpp"

namespace conerisk {

/** An n x (d+1) table of strictly positive values with column 0 identically 1. */
template <typename F>
class NumeraireVec
{
    public:
        /** Throws std::invalid_argument on a non-positive entry or v^0 != 1. */
        explicit NumeraireVec(Mat<F> values);

        static NumeraireVec cash(Index atoms) { return NumeraireVec(Mat<F>::Ones(atoms, 1)); }

        const Mat<F>& values() const { return v_; }
        Index atoms() const { return v_.rows(); }
        Index width() const { return v_.cols(); }
        Vec<F> column(Index i) const { return v_.col(i); }

    private:
        Mat<F> v_;
};

/** Atomwise Y.V for an n x (d+1) portfolio. */
template <typename F>
Vec<F> portfolio_value(const Mat<F>& y, const NumeraireVec<F>& v);

/** Y.V as an n x n(d+1) matrix on flattened portfolios. */
template <typename F>
LinearMap<F> value_map(const NumeraireVec<F>& v);

/** Pair trades e_i - v^i e_0 at each atom, i >= 1: a basis of the zero-value portfolios. */
template <typename F>
Mat<F> zero_value_basis(const NumeraireVec<F>& v);

/**
 * D(V).  Inequalities of D pull back through the value map; generators of
 * D become cash positions, plus the pair trades in both directions.
 */
template <typename F>
PolyCone<F> portfolio_cone(const PolyCone<F>& d, const NumeraireVec<F>& v);

/** The F_t-measurable width-w vectors, with both descriptions. */
template <typename F>
PolyCone<F> measurable_subspace(const FilteredSpace<F>& space, int t, Index width);

/** K_t = A_t(V) restricted to F_{t+1}-measurable portfolios. */
template <typename F>
PolyCone<F> k_cone(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t);

/** Density rows Z (n columns) to portfolio-space rows with i-th block Z * v^i. */
template <typename F>
Mat<F> lift_densities(const Mat<F>& z, const NumeraireVec<F>& v);

/**
 * D(V)* against {Z V : Z in D*}.  D(V) is generated explicitly and its dual
 * is taken from those generators only, so the comparison is not a
 * rearrangement of the same matrix.
 */
template <typename F>
ConeComparison<F> sackv_check(const PolyCone<F>& d, const NumeraireVec<F>& v, const Vec<F>& probs);

}   // namespace conerisk

#endif
