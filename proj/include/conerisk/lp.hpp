/**
 * Exact two-phase simplex over an ordered field.
 *
 * Entering columns are priced by largest reduced cost; after a run of
 * degenerate pivots the solver switches to Bland's rule (smallest eligible
 * index, ratio ties to the smallest basic index) for the rest of the phase,
 * so it terminates.  Pivoting is deterministic, so the returned vertex is a
 * function of the input.
 */
#ifndef CONERISK_LP_HPP
#define CONERISK_LP_HPP

#include <memory>
#include <vector>

#include "conerisk/linalg.hpp"

namespace conerisk {

enum class LpStatus { optimal, unbounded, infeasible };

/**
 * maximize objective . x  subject to  ineq x <= ineq_rhs,  eq x = eq_rhs,
 * x_j >= 0 for every j with nonneg[j] (an empty `nonneg` means all free).
 */
template <typename F>
struct LinearProgram
{
    Vec<F> objective;
    Mat<F> ineq;
    Vec<F> ineq_rhs;
    Mat<F> eq;
    Vec<F> eq_rhs;
    std::vector<bool> nonneg;

    explicit LinearProgram(Index vars = 0)
        : objective(Vec<F>::Zero(vars)), ineq(0, vars), ineq_rhs(0), eq(0, vars), eq_rhs(0) {}

    Index vars() const { return objective.size(); }
    void add_ineq(const Vec<F>& row, const F& rhs);
    void add_eq(const Vec<F>& row, const F& rhs);
};

template <typename F>
struct LpSolution
{
    LpStatus status = LpStatus::infeasible;
    F optimum{0};
    Vec<F> point;
};

template <typename F>
LpSolution<F> lp_solve(const LinearProgram<F>& lp);

/**
 * A constraint set taken through phase 1 once.  maximize() starts phase 2
 * from the stored feasible basis, so repeated objectives over the same
 * constraints skip the feasibility search.  Copies share the stored tableau.
 */
template <typename F>
class PreparedLp
{
    public:
        /** The objective of `lp` is ignored. */
        explicit PreparedLp(const LinearProgram<F>& lp);
        bool feasible() const;
        LpSolution<F> maximize(const Vec<F>& objective) const;

    private:
        struct Impl;
        std::shared_ptr<const Impl> impl_;
};

}   // namespace conerisk

#endif
