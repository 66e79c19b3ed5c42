#include "conerisk/cone.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <boost/dynamic_bitset.hpp>

#include "conerisk/lp.hpp"

namespace conerisk {

namespace {

using Bits = boost::dynamic_bitset<>;

template <typename F>
F sparse_dot(const Vec<F>& a, const Vec<F>& b)
{
    F s(0);
    for (Index i = 0; i < a.size(); ++i)
        if (!is_zero(a(i)) && !is_zero(b(i))) s += a(i) * b(i);
    return s;
}

template <typename F>
void axpy(Vec<F>& y, const F& alpha, const Vec<F>& x)
{
    for (Index i = 0; i < x.size(); ++i)
        if (!is_zero(x(i))) y(i) += alpha * x(i);
}

/** Nonzero rows, canonically scaled, first occurrence of duplicates kept. */
template <typename F>
Mat<F> clean_rows(const Mat<F>& m)
{
    std::vector<Vec<F>> rows;
    for (Index i = 0; i < m.rows(); ++i) {
        Vec<F> r = m.row(i).transpose();
        if (is_zero_vec(r)) continue;
        canonicalize<F>(r);
        bool dup = false;
        for (const auto& q : rows)
            if (q == r) { dup = true; break; }
        if (!dup) rows.push_back(std::move(r));
    }
    return stack_rows<F>(rows, m.cols());
}

template <typename F>
void append_pm(std::vector<Vec<F>>& out, const Mat<F>& basis)
{
    for (Index i = 0; i < basis.rows(); ++i) {
        Vec<F> v = basis.row(i).transpose();
        canonicalize<F>(v);
        out.push_back(v);
        out.push_back(-v);
    }
}

/**
 * Keeps the candidate rows that are irredundant with respect to the opposite
 * description (`rays`, `lin`).  Candidates orthogonal to every ray span the
 * degenerate part and are replaced by a +-basis of null([rays; lin]).
 * Remaining candidates survive when their zero set over `rays` is maximal.
 */
template <typename F>
Mat<F> minimal_rows(const Mat<F>& candidates, const std::vector<Vec<F>>& rays,
                    const std::vector<Vec<F>>& lin, Index dim)
{
    std::vector<Vec<F>> other = rays;
    other.insert(other.end(), lin.begin(), lin.end());
    Mat<F> degenerate_basis = nullspace<F>(stack_rows<F>(other, dim));

    struct Cand { Vec<F> v; Bits zero; };
    std::vector<Cand> proper;
    for (Index i = 0; i < candidates.rows(); ++i) {
        Vec<F> v = candidates.row(i).transpose();
        Bits z(rays.size());
        for (std::size_t r = 0; r < rays.size(); ++r)
            if (is_zero(sparse_dot(v, rays[r]))) z.set(r);
        if (z.count() == rays.size()) continue;
        proper.push_back({std::move(v), std::move(z)});
    }
    std::vector<Vec<F>> kept;
    for (std::size_t i = 0; i < proper.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < proper.size() && !drop; ++j) {
            if (i == j) continue;
            if (proper[i].zero == proper[j].zero) drop = j < i;
            else if (proper[i].zero.is_proper_subset_of(proper[j].zero)) drop = true;
        }
        if (!drop) kept.push_back(canonical<F>(proper[i].v));
    }
    append_pm<F>(kept, degenerate_basis);
    return stack_rows<F>(kept, dim);
}

}   // namespace

// ---------------------------------------------------------------- PolyCone

template <typename F>
PolyCone<F> PolyCone<F>::from_generators(Index dim, const Mat<F>& gens)
{
    if (gens.cols() != dim) throw std::invalid_argument("PolyCone: generator width mismatch");
    PolyCone c;
    c.dim_ = dim;
    c.gens_ = clean_rows<F>(gens);
    return c;
}

template <typename F>
PolyCone<F> PolyCone<F>::from_inequalities(Index dim, const Mat<F>& ineqs)
{
    if (ineqs.cols() != dim) throw std::invalid_argument("PolyCone: inequality width mismatch");
    PolyCone c;
    c.dim_ = dim;
    c.ineqs_ = clean_rows<F>(ineqs);
    return c;
}

template <typename F>
PolyCone<F> PolyCone<F>::from_both(Index dim, const Mat<F>& gens, const Mat<F>& ineqs)
{
    PolyCone c = from_generators(dim, gens);
    if (ineqs.cols() != dim) throw std::invalid_argument("PolyCone: inequality width mismatch");
    c.ineqs_ = clean_rows<F>(ineqs);
    return c;
}

template <typename F>
PolyCone<F> PolyCone<F>::full(Index dim)
{
    Mat<F> id = Mat<F>::Identity(dim, dim);
    Mat<F> gens(2 * dim, dim);
    gens << id, -id;
    return from_both(dim, gens, Mat<F>(0, dim));
}

template <typename F>
PolyCone<F> PolyCone<F>::zero(Index dim)
{
    Mat<F> id = Mat<F>::Identity(dim, dim);
    Mat<F> ineqs(2 * dim, dim);
    ineqs << id, -id;
    return from_both(dim, Mat<F>(0, dim), ineqs);
}

template <typename F>
PolyCone<F> PolyCone<F>::orthant(Index dim)
{
    Mat<F> id = Mat<F>::Identity(dim, dim);
    return from_both(dim, id, Mat<F>(-id));
}

template <typename F>
PolyCone<F> PolyCone<F>::neg_orthant(Index dim)
{
    Mat<F> id = Mat<F>::Identity(dim, dim);
    return from_both(dim, Mat<F>(-id), id);
}

template <typename F>
const Mat<F>& PolyCone<F>::generators() const
{
    if (!gens_) throw std::logic_error("PolyCone: no generator description");
    return *gens_;
}

template <typename F>
const Mat<F>& PolyCone<F>::inequalities() const
{
    if (!ineqs_) throw std::logic_error("PolyCone: no inequality description");
    return *ineqs_;
}

template <typename F>
PolyCone<F> PolyCone<F>::without_generators() const
{
    PolyCone c = *this;
    if (!c.ineqs_) c = ensure_inequalities(*this);
    c.gens_.reset();
    return c;
}

template <typename F>
PolyCone<F> PolyCone<F>::without_inequalities() const
{
    PolyCone c = *this;
    if (!c.gens_) c = ensure_generators(*this);
    c.ineqs_.reset();
    return c;
}

// ------------------------------------------------------ double description

template <typename F>
DDResult<F> dd_enumerate(const Mat<F>& ineqs, Index dim)
{
    if (dim <= 0) throw std::invalid_argument("double description: dimension 0");
    if (ineqs.cols() != dim) throw std::invalid_argument("double description: width mismatch");
    const std::size_t k = static_cast<std::size_t>(ineqs.rows());

    std::vector<Index> order(k);
    std::iota(order.begin(), order.end(), Index(0));
    std::vector<Index> nnz(k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (Index j = 0; j < dim; ++j)
            if (!is_zero(ineqs(static_cast<Index>(i), j))) ++nnz[i];
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return nnz[static_cast<std::size_t>(a)] < nnz[static_cast<std::size_t>(b)]; });

    std::vector<Vec<F>> lin;
    for (Index i = 0; i < dim; ++i) {
        Vec<F> e = Vec<F>::Zero(dim);
        e(i) = F(1);
        lin.push_back(std::move(e));
    }
    struct Ray { Vec<F> v; Bits zero; };
    std::vector<Ray> rays;

    for (std::size_t step = 0; step < k; ++step) {
        const Vec<F> h = ineqs.row(order[step]).transpose();
        if (is_zero_vec(h)) {
            for (auto& r : rays) r.zero.set(step);
            continue;
        }

        // A lineality direction not orthogonal to h turns into a ray.
        std::vector<F> lv(lin.size());
        std::size_t pick = lin.size();
        for (std::size_t l = 0; l < lin.size(); ++l) {
            lv[l] = sparse_dot(h, lin[l]);
            if (pick == lin.size() && !is_zero(lv[l])) pick = l;
        }
        if (pick < lin.size()) {
            const Vec<F> l0 = lin[pick];
            const F s0 = lv[pick];
            for (std::size_t l = 0; l < lin.size(); ++l) {
                if (l == pick || is_zero(lv[l])) continue;
                axpy<F>(lin[l], F(-lv[l] / s0), l0);
                canonicalize<F>(lin[l]);
            }
            for (auto& r : rays) {
                F val = sparse_dot(h, r.v);
                if (!is_zero(val)) {
                    axpy<F>(r.v, F(-val / s0), l0);
                    canonicalize<F>(r.v);
                }
                r.zero.set(step);
            }
            Ray fresh{sign(s0) > 0 ? Vec<F>(-l0) : l0, Bits(k)};
            canonicalize<F>(fresh.v);
            for (std::size_t j = 0; j < step; ++j) fresh.zero.set(j);
            rays.push_back(std::move(fresh));
            lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(pick));
            continue;
        }

        std::vector<F> val(rays.size());
        std::vector<std::size_t> plus, minus;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            val[r] = sparse_dot(h, rays[r].v);
            int s = sign(val[r]);
            if (s > 0) plus.push_back(r);
            else if (s < 0) minus.push_back(r);
        }
        if (plus.empty()) {
            for (std::size_t r = 0; r < rays.size(); ++r)
                if (is_zero(val[r])) rays[r].zero.set(step);
            continue;
        }

        const std::size_t needed = dim > static_cast<Index>(lin.size()) + 2
                                     ? static_cast<std::size_t>(dim - static_cast<Index>(lin.size()) - 2) : 0;
        std::vector<Ray> fresh;
        for (std::size_t a : plus) {
            for (std::size_t b : minus) {
                Bits z = rays[a].zero & rays[b].zero;
                if (z.count() < needed) continue;
                bool adjacent = true;
                for (std::size_t c = 0; c < rays.size() && adjacent; ++c) {
                    if (c == a || c == b) continue;
                    if (z.is_subset_of(rays[c].zero)) adjacent = false;
                }
                if (!adjacent) continue;
                Vec<F> v = rays[b].v * val[a];
                axpy<F>(v, F(-val[b]), rays[a].v);
                canonicalize<F>(v);
                z.set(step);
                fresh.push_back({std::move(v), std::move(z)});
            }
        }
        std::vector<Ray> next;
        next.reserve(rays.size() - plus.size() + fresh.size());
        for (std::size_t r = 0; r < rays.size(); ++r) {
            int s = sign(val[r]);
            if (s > 0) continue;
            if (s == 0) rays[r].zero.set(step);
            next.push_back(std::move(rays[r]));
        }
        for (auto& f : fresh) next.push_back(std::move(f));
        rays = std::move(next);
    }

    DDResult<F> out;
    for (auto& r : rays) out.rays.push_back(std::move(r.v));
    out.lineality = std::move(lin);
    return out;
}

template <typename F>
PolyCone<F> dd_convert(const PolyCone<F>& c)
{
    const Index dim = c.dim();
    if (dim <= 0) throw std::invalid_argument("dd_convert: dimension 0");
    if (c.has_inequalities()) {
        DDResult<F> dd = dd_enumerate<F>(c.inequalities(), dim);
        // Rays are only defined up to the lineality space; keep the part orthogonal to it.
        if (!dd.lineality.empty()) {
            Mat<F> b = stack_rows<F>(dd.lineality, dim);
            Mat<F> gram = b * b.transpose();
            for (auto& r : dd.rays) {
                auto coef = solve<F>(gram, Vec<F>(b * r));
                r -= b.transpose() * *coef;
                canonicalize<F>(r);
            }
        }
        std::vector<Vec<F>> gens = dd.rays;
        append_pm<F>(gens, stack_rows<F>(dd.lineality, dim));
        Mat<F> ineqs = minimal_rows<F>(c.inequalities(), dd.rays, dd.lineality, dim);
        return PolyCone<F>::from_both(dim, stack_rows<F>(gens, dim), ineqs);
    }
    const Mat<F>& g = c.generators();
    DDResult<F> polar = dd_enumerate<F>(g, dim);
    std::vector<Vec<F>> ineqs = polar.rays;
    append_pm<F>(ineqs, stack_rows<F>(polar.lineality, dim));
    Mat<F> gens = minimal_rows<F>(g, polar.rays, polar.lineality, dim);
    return PolyCone<F>::from_both(dim, gens, stack_rows<F>(ineqs, dim));
}

template <typename F>
PolyCone<F> ensure_generators(const PolyCone<F>& c)
{
    return c.has_generators() ? c : dd_convert(c);
}

template <typename F>
PolyCone<F> ensure_inequalities(const PolyCone<F>& c)
{
    return c.has_inequalities() ? c : dd_convert(c);
}

// ------------------------------------------------------------- operations

template <typename F>
PolyCone<F> dual_cone(const PolyCone<F>& c, const Vec<F>& weights)
{
    if (weights.size() != c.dim()) throw std::invalid_argument("dual_cone: weight count != dimension");
    for (Index i = 0; i < weights.size(); ++i)
        if (sign(weights(i)) <= 0) throw std::invalid_argument("dual_cone: weights must be positive");
    std::optional<Mat<F>> ineqs, gens;
    if (c.has_generators()) {
        Mat<F> g = c.generators();
        for (Index i = 0; i < g.rows(); ++i) g.row(i) = g.row(i).cwiseProduct(weights.transpose());
        ineqs = g;
    }
    if (c.has_inequalities()) {
        Mat<F> h = c.inequalities();
        for (Index i = 0; i < h.rows(); ++i)
            for (Index j = 0; j < h.cols(); ++j)
                if (!is_zero(h(i, j))) h(i, j) /= weights(j);
        gens = h;
    }
    if (gens && ineqs) return PolyCone<F>::from_both(c.dim(), *gens, *ineqs);
    if (gens) return PolyCone<F>::from_generators(c.dim(), *gens);
    return PolyCone<F>::from_inequalities(c.dim(), *ineqs);
}

template <typename F>
PolyCone<F> minkowski_sum(const std::vector<PolyCone<F>>& cones)
{
    if (cones.empty()) throw std::invalid_argument("minkowski_sum: no cones");
    const Index dim = cones.front().dim();
    std::vector<Vec<F>> rows;
    for (const auto& c : cones) {
        if (c.dim() != dim) throw std::invalid_argument("minkowski_sum: dimension mismatch");
        auto g = ensure_generators(c).generators();
        for (Index i = 0; i < g.rows(); ++i) rows.emplace_back(g.row(i).transpose());
    }
    return PolyCone<F>::from_generators(dim, stack_rows<F>(rows, dim));
}

template <typename F>
PolyCone<F> intersect(const std::vector<PolyCone<F>>& cones)
{
    if (cones.empty()) throw std::invalid_argument("intersect: no cones");
    const Index dim = cones.front().dim();
    std::vector<Vec<F>> rows;
    for (const auto& c : cones) {
        if (c.dim() != dim) throw std::invalid_argument("intersect: dimension mismatch");
        auto h = ensure_inequalities(c).inequalities();
        for (Index i = 0; i < h.rows(); ++i) rows.emplace_back(h.row(i).transpose());
    }
    return PolyCone<F>::from_inequalities(dim, stack_rows<F>(rows, dim));
}

template <typename F>
PolyCone<F> linear_image(const LinearMap<F>& map, const PolyCone<F>& c)
{
    if (map.cols() != c.dim()) throw std::invalid_argument("linear_image: shape mismatch");
    const Mat<F> g = ensure_generators(c).generators();
    Mat<F> img = g * map.transpose();
    return PolyCone<F>::from_generators(map.rows(), img);
}

template <typename F>
PolyCone<F> linear_preimage(const LinearMap<F>& map, const PolyCone<F>& c)
{
    if (map.rows() != c.dim()) throw std::invalid_argument("linear_preimage: shape mismatch");
    const Mat<F> h = ensure_inequalities(c).inequalities();
    Mat<F> pre = h * map;
    return PolyCone<F>::from_inequalities(map.cols(), pre);
}

template <typename F>
std::optional<Vec<F>> violated_inequality(const PolyCone<F>& c, const Vec<F>& x)
{
    const Mat<F>& h = c.inequalities();
    for (Index i = 0; i < h.rows(); ++i) {
        Vec<F> row = h.row(i).transpose();
        if (sign(sparse_dot(row, x)) > 0) return row;
    }
    return std::nullopt;
}

template <typename F>
bool cone_member(const PolyCone<F>& c, const Vec<F>& x)
{
    if (x.size() != c.dim()) throw std::invalid_argument("cone_member: dimension mismatch");
    if (c.has_inequalities()) return !violated_inequality(c, x).has_value();
    const Mat<F>& g = c.generators();
    if (is_zero_vec(x)) return true;
    if (g.rows() == 0) return false;
    LinearProgram<F> lp(g.rows());
    lp.nonneg.assign(static_cast<std::size_t>(g.rows()), true);
    for (Index j = 0; j < c.dim(); ++j) lp.add_eq(g.col(j), x(j));
    return lp_solve(lp).status != LpStatus::infeasible;
}

template <typename F>
ConeComparison<F> cone_includes(const PolyCone<F>& outer, const PolyCone<F>& inner)
{
    if (outer.dim() != inner.dim()) throw std::invalid_argument("cone_includes: dimension mismatch");
    ConeComparison<F> r;
    if (inner.has_generators()) {
        const Mat<F>& g = inner.generators();
        for (Index i = 0; i < g.rows(); ++i) {
            Vec<F> x = g.row(i).transpose();
            if (outer.has_inequalities()) {
                if (auto h = violated_inequality(outer, x)) {
                    r.witness = SeparationWitness<F>{x, h, 0};
                    return r;
                }
            } else if (!cone_member(outer, x)) {
                r.witness = SeparationWitness<F>{x, std::nullopt, 0};
                return r;
            }
        }
        r.equal = true;
        return r;
    }
    PolyCone<F> out = ensure_inequalities(outer);
    const Mat<F>& h = out.inequalities();
    const Mat<F>& hin = inner.inequalities();
    for (Index i = 0; i < h.rows(); ++i) {
        LinearProgram<F> lp(inner.dim());
        lp.objective = h.row(i).transpose();
        lp.ineq = hin;
        lp.ineq_rhs = Vec<F>::Zero(hin.rows());
        lp.add_ineq(lp.objective, F(1));
        LpSolution<F> s = lp_solve(lp);
        if (s.status != LpStatus::optimal) throw std::logic_error("cone_includes: bounded LP not optimal");
        if (sign(s.optimum) > 0) {
            r.witness = SeparationWitness<F>{s.point, Vec<F>(h.row(i).transpose()), 0};
            return r;
        }
    }
    r.equal = true;
    return r;
}

template <typename F>
ConeComparison<F> cone_equal(const PolyCone<F>& a, const PolyCone<F>& b)
{
    if (a.dim() != b.dim()) throw std::invalid_argument("cone_equal: dimension mismatch");
    auto ab = cone_includes(b, a);
    if (!ab.equal) {
        ab.witness->outside_of = 2;
        return ab;
    }
    auto ba = cone_includes(a, b);
    if (!ba.equal) {
        ba.witness->outside_of = 1;
        return ba;
    }
    return ba;
}

namespace {

/** LP over the product of the cones, variables laid out at `offset`. */
template <typename F>
LinearProgram<F> stacked_cones(const std::vector<PolyCone<F>>& cones, const std::vector<Index>& offset, Index vars)
{
    LinearProgram<F> lp(vars);
    Index rows = 0;
    std::vector<PolyCone<F>> hs;
    for (const auto& c : cones) {
        hs.push_back(ensure_inequalities(c));
        rows += hs.back().inequalities().rows();
    }
    lp.ineq = Mat<F>::Zero(rows, vars);
    lp.ineq_rhs = Vec<F>::Zero(rows);
    Index r = 0;
    for (std::size_t k = 0; k < cones.size(); ++k) {
        const Mat<F>& h = hs[k].inequalities();
        lp.ineq.block(r, offset[k], h.rows(), h.cols()) = h;
        r += h.rows();
    }
    return lp;
}

template <typename F>
Index layout(const std::vector<PolyCone<F>>& cones, const std::vector<LinearMap<F>>& maps, Index rows,
             std::vector<Index>& offset, const char* who)
{
    if (cones.size() != maps.size()) throw std::invalid_argument(std::string(who) + ": one map per cone");
    Index vars = 0;
    for (std::size_t k = 0; k < cones.size(); ++k) {
        if (maps[k].cols() != cones[k].dim() || maps[k].rows() != rows)
            throw std::invalid_argument(std::string(who) + ": shape mismatch");
        offset.push_back(vars);
        vars += cones[k].dim();
    }
    return vars;
}

}   // namespace

template <typename F>
std::optional<std::vector<Vec<F>>> sum_decompose(const std::vector<PolyCone<F>>& cones,
                                                 const std::vector<LinearMap<F>>& maps,
                                                 const Vec<F>& x)
{
    std::vector<Index> offset;
    Index vars = layout(cones, maps, x.size(), offset, "sum_decompose");
    LinearProgram<F> lp = stacked_cones(cones, offset, vars);
    lp.eq = Mat<F>::Zero(x.size(), vars);
    lp.eq_rhs = x;
    for (std::size_t k = 0; k < cones.size(); ++k)
        lp.eq.block(0, offset[k], x.size(), cones[k].dim()) = maps[k];
    LpSolution<F> s = lp_solve(lp);
    if (s.status == LpStatus::infeasible) return std::nullopt;
    std::vector<Vec<F>> parts;
    for (std::size_t k = 0; k < cones.size(); ++k) parts.push_back(s.point.segment(offset[k], cones[k].dim()));
    return parts;
}

template <typename F>
std::optional<Vec<F>> sum_separation(const std::vector<PolyCone<F>>& cones,
                                     const std::vector<LinearMap<F>>& maps,
                                     const Vec<F>& h)
{
    std::vector<Index> offset;
    Index vars = layout(cones, maps, h.size(), offset, "sum_separation");
    LinearProgram<F> lp = stacked_cones(cones, offset, vars);
    for (std::size_t k = 0; k < cones.size(); ++k)
        lp.objective.segment(offset[k], cones[k].dim()) = maps[k].transpose() * h;
    lp.add_ineq(lp.objective, F(1));
    LpSolution<F> s = lp_solve(lp);
    if (s.status != LpStatus::optimal) throw std::logic_error("sum_separation: bounded LP not optimal");
    if (sign(s.optimum) <= 0) return std::nullopt;
    Vec<F> x = Vec<F>::Zero(h.size());
    for (std::size_t k = 0; k < cones.size(); ++k) x += maps[k] * s.point.segment(offset[k], cones[k].dim());
    return x;
}

template <typename F>
std::string dump(const PolyCone<F>& c)
{
    auto lines = [](const Mat<F>& m, const char* tag) {
        std::vector<Vec<F>> rows = unstack_rows<F>(m);
        std::sort(rows.begin(), rows.end(), [](const Vec<F>& x, const Vec<F>& y) { return lex_less<F>(x, y); });
        std::string s;
        for (const auto& r : rows) {
            s += tag;
            for (Index i = 0; i < r.size(); ++i) s += " " + format_scalar(r(i));
            s += "\n";
        }
        return s;
    };
    std::string out = "dim " + std::to_string(c.dim()) + "\n";
    if (c.has_generators()) out += lines(c.generators(), "g");
    if (c.has_inequalities()) out += lines(c.inequalities(), "h");
    return out;
}

#define CONERISK_INSTANTIATE(F)                                                                      \
    template class PolyCone<F>;                                                                      \
    template DDResult<F> dd_enumerate<F>(const Mat<F>&, Index);                                      \
    template PolyCone<F> dd_convert<F>(const PolyCone<F>&);                                          \
    template PolyCone<F> ensure_generators<F>(const PolyCone<F>&);                                   \
    template PolyCone<F> ensure_inequalities<F>(const PolyCone<F>&);                                 \
    template PolyCone<F> dual_cone<F>(const PolyCone<F>&, const Vec<F>&);                            \
    template PolyCone<F> minkowski_sum<F>(const std::vector<PolyCone<F>>&);                          \
    template PolyCone<F> intersect<F>(const std::vector<PolyCone<F>>&);                              \
    template PolyCone<F> linear_image<F>(const LinearMap<F>&, const PolyCone<F>&);                   \
    template PolyCone<F> linear_preimage<F>(const LinearMap<F>&, const PolyCone<F>&);                \
    template bool cone_member<F>(const PolyCone<F>&, const Vec<F>&);                                 \
    template std::optional<Vec<F>> violated_inequality<F>(const PolyCone<F>&, const Vec<F>&);        \
    template ConeComparison<F> cone_includes<F>(const PolyCone<F>&, const PolyCone<F>&);             \
    template ConeComparison<F> cone_equal<F>(const PolyCone<F>&, const PolyCone<F>&);                \
    template std::optional<std::vector<Vec<F>>> sum_decompose<F>(const std::vector<PolyCone<F>>&,   \
                                                                 const std::vector<LinearMap<F>>&,  \
                                                                 const Vec<F>&);                    \
    template std::optional<Vec<F>> sum_separation<F>(const std::vector<PolyCone<F>>&,               \
                                                     const std::vector<LinearMap<F>>&, const Vec<F>&); \
    template std::string dump<F>(const PolyCone<F>&);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
