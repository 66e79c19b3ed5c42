#include "conerisk/lp.hpp"

#include <memory>
#include <optional>
#include <stdexcept>

namespace conerisk {

template <typename F>
void LinearProgram<F>::add_ineq(const Vec<F>& row, const F& rhs)
{
    if (row.size() != vars()) throw std::invalid_argument("lp: inequality width mismatch");
    ineq.conservativeResize(ineq.rows() + 1, vars());
    ineq.row(ineq.rows() - 1) = row.transpose();
    ineq_rhs.conservativeResize(ineq_rhs.size() + 1);
    ineq_rhs(ineq_rhs.size() - 1) = rhs;
}

template <typename F>
void LinearProgram<F>::add_eq(const Vec<F>& row, const F& rhs)
{
    if (row.size() != vars()) throw std::invalid_argument("lp: equation width mismatch");
    eq.conservativeResize(eq.rows() + 1, vars());
    eq.row(eq.rows() - 1) = row.transpose();
    eq_rhs.conservativeResize(eq_rhs.size() + 1);
    eq_rhs(eq_rhs.size() - 1) = rhs;
}

namespace {

/**
 * Dense tableau in equality form.  Row i reads  sum_j t(i,j) x_j = t(i,rhs)
 * with x_basis[i] basic; `cost` holds reduced costs (c_j - z_j) and the
 * negated objective value in the rhs slot.
 */
template <typename F>
class Tableau
{
    public:
        Tableau(Mat<F> t, std::vector<Index> basis)
            : t_(std::move(t)), basis_(std::move(basis)), cost_(Vec<F>::Zero(t_.cols())) {}

        Index rows() const { return t_.rows(); }
        Index cols() const { return t_.cols() - 1; }
        Index rhs() const { return t_.cols() - 1; }
        const Mat<F>& table() const { return t_; }
        const std::vector<Index>& basis() const { return basis_; }

        /** Installs `c` (length cols()) as objective and prices out the basis. */
        void set_objective(const Vec<F>& c)
        {
            cost_.setZero();
            cost_.head(cols()) = c;
            for (Index i = 0; i < rows(); ++i) {
                const F& cb = c(basis_[static_cast<std::size_t>(i)]);
                if (is_zero(cb)) continue;
                for (Index j = 0; j < t_.cols(); ++j)
                    if (!is_zero(t_(i, j))) cost_(j) -= cb * t_(i, j);
            }
        }

        /**
         * Largest-reduced-cost pivots on columns < `usable`, falling back to
         * Bland's rule after a run of degenerate steps so cycling cannot occur.
         * False when unbounded.
         */
        bool optimize(Index usable)
        {
            int degenerate = 0;
            for (;;) {
                const bool bland = degenerate > 20;
                Index enter = -1;
                for (Index j = 0; j < usable; ++j) {
                    if (sign(cost_(j)) <= 0) continue;
                    if (enter < 0 || (!bland && cost_(j) > cost_(enter))) enter = j;
                    if (bland) break;
                }
                if (enter < 0) return true;
                Index leave = -1;
                F best;
                for (Index i = 0; i < rows(); ++i) {
                    if (sign(t_(i, enter)) <= 0) continue;
                    F ratio = t_(i, rhs()) / t_(i, enter);
                    if (leave < 0) { leave = i; best = ratio; continue; }
                    int s = sign(F(ratio - best));
                    if (s < 0 || (s == 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                        leave = i;
                        best = ratio;
                    }
                }
                if (leave < 0) return false;
                degenerate = is_zero(best) ? degenerate + 1 : 0;
                pivot(leave, enter);
            }
        }

        void pivot(Index r, Index c)
        {
            F inv = F(1) / t_(r, c);
            std::vector<Index> nz;
            for (Index j = 0; j < t_.cols(); ++j) {
                if (is_zero(t_(r, j))) continue;
                t_(r, j) *= inv;
                nz.push_back(j);
            }
            for (Index i = 0; i < rows(); ++i) {
                if (i == r || is_zero(t_(i, c))) continue;
                F f = t_(i, c);
                for (Index j : nz) t_(i, j) -= f * t_(r, j);
            }
            if (!is_zero(cost_(c))) {
                F f = cost_(c);
                for (Index j : nz) cost_(j) -= f * t_(r, j);
            }
            basis_[static_cast<std::size_t>(r)] = c;
        }

        F value() const { return -cost_(rhs()); }

        void drop_row(Index r)
        {
            Mat<F> t(t_.rows() - 1, t_.cols());
            t.topRows(r) = t_.topRows(r);
            t.bottomRows(t_.rows() - 1 - r) = t_.bottomRows(t_.rows() - 1 - r);
            t_ = std::move(t);
            basis_.erase(basis_.begin() + r);
        }

        void keep_columns(Index n)
        {
            Mat<F> t(t_.rows(), n + 1);
            t.leftCols(n) = t_.leftCols(n);
            t.col(n) = t_.col(t_.cols() - 1);
            t_ = std::move(t);
            cost_ = Vec<F>::Zero(n + 1);
        }

    private:
        Mat<F> t_;
        std::vector<Index> basis_;
        Vec<F> cost_;
};

}   // namespace

template <typename F>
struct PreparedLp<F>::Impl
{
    Index vars = 0, art0 = 0;
    std::vector<Index> pos, neg;
    std::optional<Tableau<F>> feasible;   // phase-1 result, artificial columns dropped
};

template <typename F>
PreparedLp<F>::PreparedLp(const LinearProgram<F>& lp)
{
    const Index n = lp.vars();
    if (lp.ineq.cols() != n || lp.eq.cols() != n || lp.ineq.rows() != lp.ineq_rhs.size()
        || lp.eq.rows() != lp.eq_rhs.size() || (!lp.nonneg.empty() && lp.nonneg.size() != static_cast<std::size_t>(n)))
        throw std::invalid_argument("lp_solve: inconsistent dimensions");
    auto impl = std::make_shared<Impl>();
    impl->vars = n;

    // Column layout: structural columns (free variables split in two), then
    // one slack per inequality, then one artificial per row.
    std::vector<Index>& pos = impl->pos;
    std::vector<Index>& neg = impl->neg;
    pos.assign(static_cast<std::size_t>(n), 0);
    neg.assign(static_cast<std::size_t>(n), -1);
    Index cols = 0;
    for (Index j = 0; j < n; ++j) {
        pos[static_cast<std::size_t>(j)] = cols++;
        bool nonneg = !lp.nonneg.empty() && lp.nonneg[static_cast<std::size_t>(j)];
        if (!nonneg) neg[static_cast<std::size_t>(j)] = cols++;
    }
    const Index structural = cols;
    const Index mi = lp.ineq.rows(), me = lp.eq.rows(), m = mi + me;
    const Index slack0 = structural;
    const Index art0 = slack0 + mi;
    const Index total = art0 + m;
    impl->art0 = art0;

    Mat<F> t = Mat<F>::Zero(m, total + 1);
    std::vector<Index> basis(static_cast<std::size_t>(m));
    auto fill = [&](Index row, const auto& coeffs, const F& rhs, Index slack) {
        bool flip = sign(rhs) < 0;
        for (Index j = 0; j < n; ++j) {
            if (is_zero(coeffs(j))) continue;
            F v = flip ? F(-coeffs(j)) : F(coeffs(j));
            t(row, pos[static_cast<std::size_t>(j)]) = v;
            if (neg[static_cast<std::size_t>(j)] >= 0) t(row, neg[static_cast<std::size_t>(j)]) = -v;
        }
        if (slack >= 0) t(row, slack) = flip ? F(-1) : F(1);
        t(row, total) = flip ? F(-rhs) : rhs;
        t(row, art0 + row) = F(1);
        basis[static_cast<std::size_t>(row)] = art0 + row;
    };
    for (Index i = 0; i < mi; ++i) fill(i, lp.ineq.row(i), lp.ineq_rhs(i), slack0 + i);
    for (Index i = 0; i < me; ++i) fill(mi + i, lp.eq.row(i), lp.eq_rhs(i), -1);

    Tableau<F> tab(std::move(t), std::move(basis));

    // Phase 1: maximize -sum(artificials).
    Vec<F> phase1 = Vec<F>::Zero(total);
    for (Index i = 0; i < m; ++i) phase1(art0 + i) = F(-1);
    tab.set_objective(phase1);
    tab.optimize(total);
    if (sign(tab.value()) >= 0) {
        // Drive artificials out of the basis; rows where that is impossible are redundant.
        for (Index i = tab.rows() - 1; i >= 0; --i) {
            if (tab.basis()[static_cast<std::size_t>(i)] < art0) continue;
            Index enter = -1;
            for (Index j = 0; j < art0; ++j)
                if (!is_zero(tab.table()(i, j))) { enter = j; break; }
            if (enter >= 0) tab.pivot(i, enter);
            else tab.drop_row(i);
        }
        tab.keep_columns(art0);
        impl->feasible = std::move(tab);
    }
    impl_ = std::move(impl);
}

template <typename F>
bool PreparedLp<F>::feasible() const
{
    return impl_->feasible.has_value();
}

template <typename F>
LpSolution<F> PreparedLp<F>::maximize(const Vec<F>& objective) const
{
    const Impl& im = *impl_;
    const Index n = im.vars;
    if (objective.size() != n) throw std::invalid_argument("lp_solve: objective width mismatch");
    LpSolution<F> out;
    if (!im.feasible) {
        out.status = LpStatus::infeasible;
        return out;
    }
    Tableau<F> tab = *im.feasible;
    Vec<F> c = Vec<F>::Zero(im.art0);
    for (Index j = 0; j < n; ++j) {
        c(im.pos[static_cast<std::size_t>(j)]) = objective(j);
        if (im.neg[static_cast<std::size_t>(j)] >= 0) c(im.neg[static_cast<std::size_t>(j)]) = -objective(j);
    }
    tab.set_objective(c);
    bool bounded = tab.optimize(im.art0);

    Vec<F> x = Vec<F>::Zero(im.art0);
    for (Index i = 0; i < tab.rows(); ++i)
        x(tab.basis()[static_cast<std::size_t>(i)]) = tab.table()(i, tab.rhs());
    out.point = Vec<F>::Zero(n);
    for (Index j = 0; j < n; ++j) {
        out.point(j) = x(im.pos[static_cast<std::size_t>(j)]);
        if (im.neg[static_cast<std::size_t>(j)] >= 0) out.point(j) -= x(im.neg[static_cast<std::size_t>(j)]);
    }
    if (!bounded) {
        out.status = LpStatus::unbounded;
        return out;
    }
    out.status = LpStatus::optimal;
    out.optimum = objective.dot(out.point);
    return out;
}

template <typename F>
LpSolution<F> lp_solve(const LinearProgram<F>& lp)
{
    return PreparedLp<F>(lp).maximize(lp.objective);
}

template struct LinearProgram<Rational>;
template struct LinearProgram<Quad2>;
template class PreparedLp<Rational>;
template class PreparedLp<Quad2>;
template LpSolution<Rational> lp_solve<Rational>(const LinearProgram<Rational>&);
template LpSolution<Quad2> lp_solve<Quad2>(const LinearProgram<Quad2>&);

}   // namespace conerisk
