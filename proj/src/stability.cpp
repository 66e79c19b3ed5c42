#include "conerisk/stability.hpp"

namespace conerisk {

template <typename F>
PolyCone<F> predictable_preimage(const FilteredSpace<F>& space, const PolyCone<F>& d, Index width, int t)
{
    const Index n = space.atoms(), m = n * width;
    if (d.dim() != m) throw std::invalid_argument("predictable_preimage: cone dimension != atoms * width");
    if (t < 0 || t >= space.horizon()) throw std::out_of_range("predictable_preimage: t must lie in 0..T-1");
    Mat<F> e = cond_expect_map(space, t + 1, width);
    Mat<F> image = ensure_generators(d).generators() * e.transpose();
    const Partition& part = space.partition(t);
    std::vector<Vec<F>> gens;
    for (Index k = 0; k < image.rows(); ++k)
        for (Index b = 0; b < part.count(); ++b) {
            Vec<F> g = image.row(k).transpose().cwiseProduct(block_indicator(space, t, b, width));
            if (!is_zero_vec(g)) gens.push_back(std::move(g));
        }
    PolyCone<F> cone_t = dd_convert(PolyCone<F>::from_generators(m, stack_rows<F>(gens, m)));
    // E is a projection, so the generators of cone_t are their own images.
    Mat<F> ker = nullspace(e);
    const Mat<F>& g = cone_t.generators();
    Mat<F> all(g.rows() + 2 * ker.rows(), m);
    all << g, ker, Mat<F>(-ker);
    return PolyCone<F>::from_both(m, all, Mat<F>(cone_t.inequalities() * e));
}

template <typename F>
PolyCone<F> stable_hull(const FilteredSpace<F>& space, const PolyCone<F>& d, Index width)
{
    std::vector<PolyCone<F>> parts;
    for (int t = 0; t < space.horizon(); ++t) parts.push_back(predictable_preimage(space, d, width, t).without_generators());
    if (parts.empty()) return ensure_inequalities(d);
    return intersect(parts);
}

template <typename F>
ConeComparison<F> is_predictably_stable(const FilteredSpace<F>& space, const PolyCone<F>& d, Index width)
{
    PolyCone<F> hull = stable_hull(space, d, width);
    ConeComparison<F> inside = cone_includes(hull, ensure_generators(d));
    if (!inside) throw std::logic_error("is_predictably_stable: D is not contained in its stable hull");
    return cone_includes(ensure_inequalities(d), hull);
}

template <typename F>
PolyCone<F> lifted_dual(const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    return PolyCone<F>::from_generators(v.atoms() * v.width(), lift_densities(dual_generators(rm), v));
}

namespace {

template <typename F>
Vec<F> density(const FilteredSpace<F>& space, const Vec<F>& q)
{
    if (q.size() != space.atoms()) throw std::invalid_argument("paste: measure length != atom count");
    return q.cwiseQuotient(space.probs());
}

template <typename F>
Vec<F> stopped(const FilteredSpace<F>& space, const Vec<F>& z, const StoppingTime& tau)
{
    Mat<F> m = z;
    return cond_expect_stopped(space, m, tau).values.col(0);
}

}   // namespace

template <typename F>
Vec<F> paste(const FilteredSpace<F>& space, const Vec<F>& q, const Vec<F>& q_prime, const StoppingTime& tau)
{
    Vec<F> z = density(space, q), w = density(space, q_prime);
    Vec<F> zt = stopped(space, z, tau), wt = stopped(space, w, tau);
    Vec<F> out = Vec<F>::Zero(q.size());
    for (Index a = 0; a < q.size(); ++a) {
        if (tau[static_cast<std::size_t>(a)] == space.horizon()) {   // never switched
            out(a) = q(a);
            continue;
        }
        if (is_zero(zt(a))) continue;
        if (is_zero(wt(a))) throw PasteError("paste: Z_tau > 0 = W_tau at atom " + std::to_string(a));
        out(a) = zt(a) / wt(a) * w(a) * space.probs()(a);
    }
    return out;
}

template <typename F>
bool pastable(const FilteredSpace<F>& space, const NumeraireVec<F>& v, const Vec<F>& q, const Vec<F>& q_prime,
              const StoppingTime& tau)
{
    Conditioned<F> a = cond_expect_stopped(space, v.values(), tau, std::optional<Vec<F>>(q));
    Conditioned<F> b = cond_expect_stopped(space, v.values(), tau, std::optional<Vec<F>>(q_prime));
    for (Index k = 0; k < space.atoms(); ++k) {
        bool da = a.defined[static_cast<std::size_t>(k)], db = b.defined[static_cast<std::size_t>(k)];
        if (da && !db) return false;
        if (da && db && a.values.row(k) != b.values.row(k)) return false;
    }
    return true;
}

namespace {

template <typename F>
std::string describe_violation(const RepresentingSet<F>& qs, const Vec<F>& q)
{
    if (qs.kind == RepKind::quad_ball)
        return "sum q^2 = " + format_scalar(quad_mass(q)) + " > " + format_scalar(qs.radius);
    if (qs.ineqs) {
        const Mat<F>& h = *qs.ineqs;
        for (Index i = 0; i < h.rows(); ++i) {
            F val = (h.row(i) * q)(0);
            if (sign(val) > 0)
                return "h.q = " + format_scalar(val) + " > 0 for h = " + format_vec<F>(h.row(i).transpose());
        }
    }
    return "outside the convex hull of the vertices";
}

}   // namespace

template <typename F>
std::optional<PasteWitness<F>> vstability_witness_search(const RiskMeasure<F>& rm, const NumeraireVec<F>& v,
                                                         std::optional<std::size_t> cap)
{
    const auto& space = rm.space();
    std::vector<Vec<F>> cands;
    if (rm.set().kind == RepKind::quad_ball) cands = rm.set().witnesses;
    else cands = unstack_rows<F>(rm.vertices());
    std::vector<StoppingTime> taus = enumerate_stopping_times(space, cap);
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = 0; j < cands.size(); ++j) {
            if (i == j) continue;
            for (const auto& tau : taus) {
                if (!pastable(space, v, cands[i], cands[j], tau)) continue;
                Vec<F> pasted = paste(space, cands[i], cands[j], tau);
                if (oracle_member(rm.set(), pasted)) continue;
                return PasteWitness<F>{tau, static_cast<Index>(i), static_cast<Index>(j), cands[i], cands[j], pasted,
                                       describe_violation(rm.set(), pasted)};
            }
        }
    return std::nullopt;
}

template <typename F>
ConeComparison<F> crucial_claim_check(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t)
{
    const auto& space = rm.space();
    PolyCone<F> m = predictable_preimage(space, lifted_dual(rm, v), v.width(), t);
    return cone_equal(k_cone(rm, v, t), dual_cone(m, space.pairing_weights(v.width())));
}

#define CONERISK_INSTANTIATE(F)                                                                                 \
    template PolyCone<F> predictable_preimage<F>(const FilteredSpace<F>&, const PolyCone<F>&, Index, int);      \
    template PolyCone<F> stable_hull<F>(const FilteredSpace<F>&, const PolyCone<F>&, Index);                    \
    template ConeComparison<F> is_predictably_stable<F>(const FilteredSpace<F>&, const PolyCone<F>&, Index);    \
    template PolyCone<F> lifted_dual<F>(const RiskMeasure<F>&, const NumeraireVec<F>&);                         \
    template Vec<F> paste<F>(const FilteredSpace<F>&, const Vec<F>&, const Vec<F>&, const StoppingTime&);       \
    template bool pastable<F>(const FilteredSpace<F>&, const NumeraireVec<F>&, const Vec<F>&, const Vec<F>&,    \
                              const StoppingTime&);                                                             \
    template std::optional<PasteWitness<F>> vstability_witness_search<F>(                                       \
        const RiskMeasure<F>&, const NumeraireVec<F>&, std::optional<std::size_t>);                             \
    template ConeComparison<F> crucial_claim_check<F>(const RiskMeasure<F>&, const NumeraireVec<F>&, int);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
