#include "conerisk/market.hpp"

namespace conerisk {

template <typename F>
NumeraireVec<F>::NumeraireVec(Mat<F> values) : v_(std::move(values))
{
    if (v_.cols() < 1 || v_.rows() < 1) throw std::invalid_argument("numeraires: empty table");
    for (Index a = 0; a < v_.rows(); ++a) {
        if (v_(a, 0) != F(1)) throw std::invalid_argument("numeraires: v^0 must be identically 1");
        for (Index i = 0; i < v_.cols(); ++i)
            if (sign(v_(a, i)) <= 0)
                throw std::invalid_argument("numeraires: v^" + std::to_string(i) + " is not strictly positive at atom " +
                                            std::to_string(a));
    }
}

template <typename F>
Vec<F> portfolio_value(const Mat<F>& y, const NumeraireVec<F>& v)
{
    if (y.rows() != v.atoms() || y.cols() != v.width()) throw std::invalid_argument("portfolio_value: shape mismatch");
    return y.cwiseProduct(v.values()).rowwise().sum();
}

template <typename F>
LinearMap<F> value_map(const NumeraireVec<F>& v)
{
    const Index n = v.atoms();
    LinearMap<F> l = LinearMap<F>::Zero(n, n * v.width());
    for (Index i = 0; i < v.width(); ++i)
        for (Index a = 0; a < n; ++a) l(a, i * n + a) = v.values()(a, i);
    return l;
}

template <typename F>
Mat<F> zero_value_basis(const NumeraireVec<F>& v)
{
    const Index n = v.atoms(), w = v.width();
    Mat<F> k = Mat<F>::Zero(n * (w - 1), n * w);
    for (Index i = 1; i < w; ++i)
        for (Index a = 0; a < n; ++a) {
            Index r = (i - 1) * n + a;
            k(r, i * n + a) = F(1);
            k(r, a) = -v.values()(a, i);
        }
    return k;
}

template <typename F>
PolyCone<F> portfolio_cone(const PolyCone<F>& d, const NumeraireVec<F>& v)
{
    const Index n = v.atoms(), m = n * v.width();
    if (d.dim() != n) throw std::invalid_argument("portfolio_cone: claim cone dimension != atom count");
    std::optional<Mat<F>> gens, ineqs;
    if (d.has_inequalities()) ineqs = Mat<F>(d.inequalities() * value_map(v));
    if (d.has_generators()) {
        const Mat<F>& g = d.generators();
        Mat<F> k = zero_value_basis(v);
        Mat<F> all = Mat<F>::Zero(g.rows() + 2 * k.rows(), m);
        all.block(0, 0, g.rows(), n) = g;   // cash holds the claim
        all.block(g.rows(), 0, k.rows(), m) = k;
        all.block(g.rows() + k.rows(), 0, k.rows(), m) = -k;
        gens = std::move(all);
    }
    if (gens && ineqs) return PolyCone<F>::from_both(m, *gens, *ineqs);
    if (gens) return PolyCone<F>::from_generators(m, *gens);
    return PolyCone<F>::from_inequalities(m, *ineqs);
}

template <typename F>
PolyCone<F> measurable_subspace(const FilteredSpace<F>& space, int t, Index width)
{
    const Index n = space.atoms(), m = n * width;
    Mat<F> basis = measurable_basis(space, t, width);
    Mat<F> gens(2 * basis.rows(), m);
    gens << basis, Mat<F>(-basis);
    std::vector<Vec<F>> rows;
    for (const auto& block : space.partition(t).blocks())
        for (std::size_t k = 1; k < block.size(); ++k)
            for (Index i = 0; i < width; ++i) {
                Vec<F> r = Vec<F>::Zero(m);
                r(i * n + block[k]) = F(1);
                r(i * n + block[0]) = F(-1);
                rows.push_back(r);
                rows.push_back(-r);
            }
    return PolyCone<F>::from_both(m, gens, stack_rows<F>(rows, m));
}

template <typename F>
PolyCone<F> k_cone(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t)
{
    const auto& space = rm.space();
    if (t < 0 || t >= space.horizon()) throw std::out_of_range("k_cone: t must lie in 0..T-1");
    PolyCone<F> a = ensure_inequalities(acceptance_cone(rm, t));
    return intersect<F>({portfolio_cone(a.without_generators(), v), measurable_subspace(space, t + 1, v.width())});
}

template <typename F>
Mat<F> lift_densities(const Mat<F>& z, const NumeraireVec<F>& v)
{
    const Index n = v.atoms();
    if (z.cols() != n) throw std::invalid_argument("lift_densities: density length != atom count");
    Mat<F> out(z.rows(), n * v.width());
    for (Index i = 0; i < v.width(); ++i)
        for (Index k = 0; k < z.rows(); ++k)
            out.block(k, i * n, 1, n) = z.row(k).cwiseProduct(v.values().col(i).transpose());
    return out;
}

template <typename F>
ConeComparison<F> sackv_check(const PolyCone<F>& d, const NumeraireVec<F>& v, const Vec<F>& probs)
{
    const Index n = v.atoms();
    Vec<F> w(n * v.width());
    for (Index i = 0; i < v.width(); ++i) w.segment(i * n, n) = probs;
    PolyCone<F> both = dd_convert(d);
    PolyCone<F> lhs = dual_cone(portfolio_cone(both.without_inequalities(), v), w);
    PolyCone<F> dual = dual_cone(both.without_generators(), probs);
    PolyCone<F> rhs = PolyCone<F>::from_generators(n * v.width(), lift_densities(dual.generators(), v));
    return cone_equal(lhs, rhs);
}

#define CONERISK_INSTANTIATE(F)                                                                       \
    template class NumeraireVec<F>;                                                                   \
    template Vec<F> portfolio_value<F>(const Mat<F>&, const NumeraireVec<F>&);                        \
    template LinearMap<F> value_map<F>(const NumeraireVec<F>&);                                       \
    template Mat<F> zero_value_basis<F>(const NumeraireVec<F>&);                                      \
    template PolyCone<F> portfolio_cone<F>(const PolyCone<F>&, const NumeraireVec<F>&);               \
    template PolyCone<F> measurable_subspace<F>(const FilteredSpace<F>&, int, Index);                 \
    template PolyCone<F> k_cone<F>(const RiskMeasure<F>&, const NumeraireVec<F>&, int);               \
    template Mat<F> lift_densities<F>(const Mat<F>&, const NumeraireVec<F>&);                         \
    template ConeComparison<F> sackv_check<F>(const PolyCone<F>&, const NumeraireVec<F>&, const Vec<F>&);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
