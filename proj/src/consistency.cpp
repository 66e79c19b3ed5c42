#include "conerisk/consistency.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "conerisk/lp.hpp"

namespace conerisk {

namespace {

template <typename F>
std::vector<Index> child_blocks(const FilteredSpace<F>& space, int t, Index b)
{
    std::set<Index> out;
    for (Index a : space.partition(t).block(b)) out.insert(space.partition(t + 1).block_of(a));
    return {out.begin(), out.end()};
}

template <typename F>
bool nonpositive(const Vec<F>& x)
{
    for (Index i = 0; i < x.size(); ++i)
        if (sign(x(i)) > 0) return false;
    return true;
}

void require_horizon(int horizon, const char* who)
{
    if (horizon < 1) throw std::invalid_argument(std::string(who) + ": needs horizon T >= 1");
}

/**
 * Largest violation of q.(1_C z) <= 0 over Q, with the maximizing vertex.
 * Q comes through the cached program over its inequalities.
 */
template <typename F>
std::optional<Vec<F>> separating_measure(const RiskMeasure<F>& rm, const std::vector<Index>& c, const Vec<F>& z)
{
    Vec<F> obj = Vec<F>::Zero(z.size());
    for (Index a : c) obj(a) = z(a);
    LpSolution<F> s = rm.measure_program().maximize(obj);
    if (s.status != LpStatus::optimal) throw std::logic_error("separating_measure: LP over Q is not optimal");
    if (sign(s.optimum) <= 0) return std::nullopt;
    return s.point;
}

/**
 * epsilon_t on one F_t-block when Q is only known through its inequalities.
 * Same program as the vertex form, with vertices of Q added as they are violated.
 * Starting every group at one strictly positive member keeps the master bounded:
 * the child cuts sum to the block cut.
 */
template <typename F>
F epsilon_block_hrep(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t, Index b, const Vec<F>& x)
{
    const auto& space = rm.space();
    const Mat<F>& val = v.values();
    const Index w = v.width();
    const Partition& next = space.partition(t + 1);
    const std::vector<Index>& block = space.partition(t).block(b);
    std::vector<Index> kids = child_blocks(space, t, b);
    const Index nc = static_cast<Index>(kids.size());
    LinearProgram<F> lp(1 + nc * w);
    lp.objective(0) = F(-1);
    auto child_cut = [&](Index c, const Vec<F>& q) {
        Vec<F> row = Vec<F>::Zero(1 + nc * w);
        F cx(0);
        for (Index a : next.block(kids[static_cast<std::size_t>(c)])) {
            cx += q(a) * x(a);
            for (Index i = 0; i < w; ++i) row(1 + c * w + i) -= q(a) * val(a, i);
        }
        lp.add_ineq(row, F(-cx));
    };
    auto block_cut = [&](const Vec<F>& q) {
        Vec<F> row = Vec<F>::Zero(1 + nc * w);
        for (Index c = 0; c < nc; ++c)
            for (Index a : next.block(kids[static_cast<std::size_t>(c)])) {
                row(0) -= q(a);
                for (Index i = 0; i < w; ++i) row(1 + c * w + i) += q(a) * val(a, i);
            }
        lp.add_ineq(row, F(0));
    };
    const Vec<F>& p = *rm.inner_member();
    block_cut(p);
    for (Index c = 0; c < nc; ++c) child_cut(c, p);
    for (;;) {
        LpSolution<F> s = lp_solve(lp);
        if (s.status != LpStatus::optimal) throw std::logic_error("epsilon: block LP is not optimal");
        Vec<F> yv = Vec<F>::Zero(space.atoms());
        for (Index c = 0; c < nc; ++c)
            for (Index a : next.block(kids[static_cast<std::size_t>(c)]))
                for (Index i = 0; i < w; ++i) yv(a) += s.point(1 + c * w + i) * val(a, i);
        bool cut = false;
        if (auto q = separating_measure(rm, block, Vec<F>(yv.array() - s.point(0)))) {
            block_cut(*q);
            cut = true;
        }
        for (Index c = 0; c < nc; ++c)
            if (auto q = separating_measure(rm, next.block(kids[static_cast<std::size_t>(c)]), Vec<F>(x - yv))) {
                child_cut(c, *q);
                cut = true;
            }
        if (!cut) return -s.optimum;
    }
}

/** pi_0..pi_{T-1} in K_t with sum pi_t.V = target, from the inequalities of Q; none when infeasible. */
template <typename F>
std::optional<std::vector<Mat<F>>> decompose_hrep(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, const Vec<F>& target)
{
    const auto& space = rm.space();
    const Mat<F>& val = v.values();
    const Index n = space.atoms(), w = v.width();
    const int big_t = space.horizon();
    std::vector<Index> pi0(static_cast<std::size_t>(big_t));
    Index vars = 0;
    for (int t = 0; t < big_t; ++t) {
        pi0[static_cast<std::size_t>(t)] = vars;
        vars += space.partition(t + 1).count() * w;
    }
    auto var = [&](int t, Index a, Index i) {
        return pi0[static_cast<std::size_t>(t)] + space.partition(t + 1).block_of(a) * w + i;
    };
    LinearProgram<F> lp(vars);
    auto cut = [&](int t, const std::vector<Index>& block, const Vec<F>& q) {
        Vec<F> row = Vec<F>::Zero(vars);
        for (Index a : block)
            for (Index i = 0; i < w; ++i) row(var(t, a, i)) += q(a) * val(a, i);
        lp.add_ineq(row, F(0));
    };
    for (Index a = 0; a < n; ++a) {
        Vec<F> row = Vec<F>::Zero(vars);
        for (int t = 0; t < big_t; ++t)
            for (Index i = 0; i < w; ++i) row(var(t, a, i)) += val(a, i);
        lp.add_eq(row, target(a));
    }
    for (int t = 0; t < big_t; ++t)
        for (const auto& block : space.partition(t).blocks()) cut(t, block, *rm.inner_member());
    for (;;) {
        LpSolution<F> s = lp_solve(lp);
        if (s.status == LpStatus::infeasible) return std::nullopt;
        if (s.status != LpStatus::optimal) throw std::logic_error("decompose: master LP is not optimal");
        std::vector<Mat<F>> pis;
        bool added = false;
        for (int t = 0; t < big_t; ++t) {
            Mat<F> pi(n, w);
            for (Index a = 0; a < n; ++a)
                for (Index i = 0; i < w; ++i) pi(a, i) = s.point(var(t, a, i));
            Vec<F> value = portfolio_value(pi, v);
            for (const auto& block : space.partition(t).blocks())
                if (auto q = separating_measure(rm, block, value)) {
                    cut(t, block, *q);
                    added = true;
                }
            pis.push_back(std::move(pi));
        }
        if (!added) return pis;
    }
}

}   // namespace

template <typename F>
Vec<F> epsilon(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t, const Vec<F>& x)
{
    const auto& space = rm.space();
    const Index n = space.atoms(), w = v.width();
    if (t < 0 || t >= space.horizon()) throw std::out_of_range("epsilon: t must lie in 0..T-1");
    if (x.size() != n) throw std::invalid_argument("epsilon: claim length != atom count");
    if (!rm.has_vertices()) {
        if (rm.set().kind != RepKind::polytope) throw Unsupported("epsilon: needs a polytope representing set");
        Vec<F> out(n);
        for (Index b = 0; b < space.partition(t).count(); ++b) {
            F e = epsilon_block_hrep(rm, v, t, b, x);
            for (Index a : space.partition(t).block(b)) out(a) = e;
        }
        return out;
    }
    const Mat<F>& verts = rm.vertices();
    const Mat<F>& val = v.values();
    const Partition& next = space.partition(t + 1);
    Vec<F> out(n);
    for (Index b = 0; b < space.partition(t).count(); ++b) {
        std::vector<Index> kids = child_blocks(space, t, b);
        const Index nc = static_cast<Index>(kids.size());
        // variable 0 is u, then y(c, i) at 1 + c*w + i, all free
        LinearProgram<F> lp(1 + nc * w);
        lp.objective(0) = F(-1);
        for (Index k = 0; k < verts.rows(); ++k) {
            Vec<F> row = Vec<F>::Zero(1 + nc * w);
            F mass(0);
            for (Index c = 0; c < nc; ++c) {
                Vec<F> child = Vec<F>::Zero(1 + nc * w);
                F cmass(0), cx(0);
                for (Index a : next.block(kids[static_cast<std::size_t>(c)])) {
                    const F& q = verts(k, a);
                    if (is_zero(q)) continue;
                    cmass += q;
                    cx += q * x(a);
                    for (Index i = 0; i < w; ++i) child(1 + c * w + i) -= q * val(a, i);
                }
                if (is_zero(cmass)) continue;
                mass += cmass;
                row -= child;
                lp.add_ineq(child, F(-cx));   // X - Y.V acceptable at t+1 on this child
            }
            if (is_zero(mass)) continue;
            row(0) = -mass;
            lp.add_ineq(row, F(0));           // rho_t(Y.V) <= u on the block
        }
        LpSolution<F> s = lp_solve(lp);
        if (s.status != LpStatus::optimal) throw std::logic_error("epsilon: block LP is not optimal");
        for (Index a : space.partition(t).block(b)) out(a) = -s.optimum;
    }
    return out;
}

template <typename F>
ConsistencyResult<F> is_v_time_consistent(const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    const auto& space = rm.space();
    const Index n = space.atoms();
    require_horizon(space.horizon(), "is_v_time_consistent");
    const LinearMap<F> value = value_map(v);
    const LinearMap<F> id = LinearMap<F>::Identity(n, n);
    ConsistencyResult<F> res;
    for (int t = space.horizon() - 1; t >= 0; --t) {
        PolyCone<F> at = dd_convert(acceptance_cone(rm, t));
        std::vector<PolyCone<F>> parts{k_cone(rm, v, t), ensure_inequalities(acceptance_cone(rm, t + 1))};
        std::vector<LinearMap<F>> maps{value, id};
        const Mat<F>& g = at.generators();
        for (Index k = 0; k < g.rows(); ++k) {
            Vec<F> claim = g.row(k).transpose();
            if (sum_decompose(parts, maps, claim)) continue;
            res.holds = false;
            res.level = t;
            res.claim = claim;
            res.rho = rho(rm, t, claim);
            res.eps = epsilon(rm, v, t, claim);
            return res;
        }
        const Mat<F>& h = at.inequalities();
        for (Index k = 0; k < h.rows(); ++k)
            if (auto x = sum_separation(parts, maps, Vec<F>(h.row(k).transpose())))
                throw TheoremViolation("K_t.V + A_{t+1} leaves A_t at t=" + std::to_string(t) + ": " + format_vec(*x));
    }
    return res;
}

template <typename F>
RepresentabilityResult<F> is_predictably_represented(const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    const auto& space = rm.space();
    const Index m = space.atoms() * v.width();
    require_horizon(space.horizon(), "is_predictably_represented");
    PolyCone<F> a0 = dd_convert(acceptance_cone(rm, 0));
    PolyCone<F> a0v = portfolio_cone(a0.without_inequalities(), v);
    std::vector<PolyCone<F>> ks;
    for (int t = 0; t < space.horizon(); ++t) ks.push_back(k_cone(rm, v, t));
    std::vector<LinearMap<F>> maps(ks.size(), LinearMap<F>::Identity(m, m));
    RepresentabilityResult<F> res;
    const Mat<F>& g = a0v.generators();
    for (Index k = 0; k < g.rows(); ++k) {
        Vec<F> y = g.row(k).transpose();
        if (sum_decompose(ks, maps, y)) continue;
        res.holds = false;
        res.portfolio = y;
        return res;
    }
    Mat<F> h = a0.inequalities() * value_map(v);
    for (Index k = 0; k < h.rows(); ++k)
        if (auto x = sum_separation(ks, maps, Vec<F>(h.row(k).transpose())))
            throw TheoremViolation("sum of K_t leaves A_0(V): " + format_vec(*x));
    return res;
}

namespace {

/** An F_t-measurable portfolio Y with Y.V = g, solved block by block. */
template <typename F>
std::optional<Mat<F>> representative(const FilteredSpace<F>& space, const NumeraireVec<F>& v, int t, const Vec<F>& g)
{
    const Index w = v.width();
    Mat<F> y = Mat<F>::Zero(space.atoms(), w);
    for (const auto& block : space.partition(t).blocks()) {
        const Index k = static_cast<Index>(block.size());
        Mat<F> a(k, w);
        Vec<F> rhs(k);
        for (Index r = 0; r < k; ++r) {
            a.row(r) = v.values().row(block[static_cast<std::size_t>(r)]);
            rhs(r) = g(block[static_cast<std::size_t>(r)]);
        }
        auto c = solve(a, rhs);
        if (!c) return std::nullopt;
        for (Index atom : block) y.row(atom) = c->transpose();
    }
    return y;
}

/** max sum_{a in block} q_a g_a over the inequality-described Q. */
template <typename F>
F pairing_max(const RiskMeasure<F>& rm, const std::vector<Index>& block, const Vec<F>& g)
{
    Vec<F> obj = Vec<F>::Zero(g.size());
    for (Index a : block) obj(a) = g(a);
    LpSolution<F> s = rm.measure_program().maximize(obj);
    if (s.status != LpStatus::optimal) throw std::logic_error("pairing_max: LP over Q is not optimal");
    return s.optimum;
}

/** Latest t with g the value of an acceptable F_{t+1}-measurable portfolio. */
template <typename F>
std::optional<int> cover_primal(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, const Vec<F>& g)
{
    const int horizon = rm.space().horizon();
    if (nonpositive(g)) return horizon - 1;
    for (int t = horizon - 1; t >= 0; --t) {
        if (!representative(rm.space(), v, t + 1, g)) continue;
        if (nonpositive<F>(rho(rm, t, g))) return t;
    }
    return std::nullopt;
}

/**
 * Latest t with g the value of an F_{t+1}-measurable Y such that
 * E[Z 1_B Y] <= 0 for every Z in the lifted dual and every F_t block B,
 * i.e. Y lies in the dual of M_t(D).
 */
template <typename F>
std::optional<int> cover_dual(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, const Vec<F>& g)
{
    const auto& space = rm.space();
    if (nonpositive(g)) return space.horizon() - 1;   // D lies in the nonnegative densities
    for (int t = space.horizon() - 1; t >= 0; --t) {
        if (!representative(space, v, t + 1, g)) continue;
        bool ok = true;
        for (const auto& block : space.partition(t).blocks()) {
            bool nonpos = true;
            for (Index a : block) nonpos = nonpos && sign(g(a)) <= 0;
            if (nonpos) continue;   // Q is nonnegative
            if (sign(pairing_max(rm, block, g)) > 0) {
                ok = false;
                break;
            }
        }
        if (ok) return t;
    }
    return std::nullopt;
}

std::string verdict(const std::optional<bool>& b)
{
    return b ? (*b ? "true" : "false") : "undecided";
}

template <typename F>
EquivalenceReport exact_route(const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    EquivalenceReport r;
    r.route = "exact";
    ConsistencyResult<F> tc = is_v_time_consistent(rm, v);
    r.time_consistent = tc.holds;
    r.certificates["time_consistent"] =
        tc.holds ? "A_t = K_t.V + A_{t+1} at every t"
                 : "t=" + std::to_string(tc.level) + " claim " + format_vec(*tc.claim) + " lies in A_t but not in K_t.V + A_{t+1}; rho=" +
                       format_vec(*tc.rho) + " eps=" + format_vec(*tc.eps);
    RepresentabilityResult<F> rep = is_predictably_represented(rm, v);
    r.representable = rep.holds;
    r.certificates["representable"] =
        rep.holds ? "every generator of A_0(V) splits over the K_t"
                  : "portfolio " + format_vec(*rep.portfolio) + " lies in A_0(V) but not in the sum of the K_t";
    ConeComparison<F> st = is_predictably_stable(rm.space(), lifted_dual(rm, v), v.width());
    r.dual_stable = st.equal;
    r.certificates["dual_stable"] =
        st.equal ? "stable hull of A_0(V)* equals A_0(V)*"
                 : "density " + format_vec(st.witness->point) + " lies in the stable hull but violates " +
                       format_vec(*st.witness->violated) + " of A_0(V)*";
    return r;
}

template <typename F>
EquivalenceReport cover_route(const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    const auto& space = rm.space();
    if (space.horizon() > 2)
        throw ScaleLimit("no vertex list for Q and T > 2: the coverage route only settles the level t = 0");
    if (!rm.set().ineqs) throw Unsupported("coverage route needs Q in inequality form");
    EquivalenceReport r;
    r.route = "cover";
    const Mat<F> g = acceptance_cone(rm, 0).generators();
    std::map<int, int> primal_used, dual_used;
    for (Index k = 0; k < g.rows(); ++k) {
        Vec<F> claim = g.row(k).transpose();
        auto p = cover_primal(rm, v, claim);
        auto d = cover_dual(rm, v, claim);
        if (!p || !d) {
            // eps_0 > 0 on a member of A_0 refutes A_0 = K_0.V + A_1, and the sum of the K_t.V sits inside that
            Vec<F> e = epsilon(rm, v, 0, claim);
            if (sign(e(0)) <= 0)
                throw ScaleLimit("generator " + format_vec(claim) + " of A_0 is not covered by a single K_t; undecided");
            r.time_consistent = r.representable = false;
            r.certificates["time_consistent"] = "t=0 claim " + format_vec(claim) + " lies in A_0 but not in K_0.V + A_1; rho=" +
                                                format_vec(rho(rm, 0, claim)) + " eps=" + format_vec(e);
            r.certificates["representable"] = "claim " + format_vec(claim) + " in A_0 has eps_0 > 0, so no sum of K_t.V reaches it";
            r.certificates["dual_stable"] = "undecided without a vertex list for Q";
            return r;
        }
        ++primal_used[*p];
        ++dual_used[*d];
    }
    auto tally = [](const std::map<int, int>& used) {
        std::string s;
        for (auto [t, c] : used) s += (s.empty() ? "" : ", ") + std::to_string(c) + " at t=" + std::to_string(t);
        return s;
    };
    r.time_consistent = r.representable = r.dual_stable = true;
    const std::string count = std::to_string(g.rows());
    r.certificates["time_consistent"] = "all " + count + " generators of A_0 lie in K_0.V + A_1 (" + tally(primal_used) + ")";
    r.certificates["representable"] = "all " + count + " generators of A_0(V) lie in a single K_t; pair trades in K_{T-1}";
    r.certificates["dual_stable"] = "all " + count + " generators of A_0(V) lie in the dual of some M_t(D) (" + tally(dual_used) + ")";
    return r;
}

}   // namespace

std::string format_report(const EquivalenceReport& r)
{
    std::ostringstream os;
    os << "route: " << r.route << "\n"
       << "time_consistent: " << verdict(r.time_consistent) << "\n"
       << "representable: " << verdict(r.representable) << "\n"
       << "dual_stable: " << verdict(r.dual_stable) << "\n"
       << "agreement: " << (r.agreement ? "true" : "false") << "\n";
    for (const auto& [k, c] : r.certificates) os << "certificate " << k << ": " << c << "\n";
    return os.str();
}

template <typename F>
EquivalenceReport theorem_main_report(const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    if (rm.set().kind != RepKind::polytope) throw Unsupported("theorem_main_report: needs a polytope representing set");
    if (v.atoms() != rm.space().atoms()) throw std::invalid_argument("theorem_main_report: numeraire length != atom count");
    EquivalenceReport r = rm.has_vertices() ? exact_route(rm, v) : cover_route(rm, v);
    // undecided properties are left out of the comparison
    std::vector<bool> decided;
    for (const auto& b : {r.time_consistent, r.representable, r.dual_stable})
        if (b) decided.push_back(*b);
    r.agreement = std::adjacent_find(decided.begin(), decided.end(), std::not_equal_to<>()) == decided.end();
    if (!r.agreement) throw TheoremViolation("the three properties disagree\n" + format_report(r));
    return r;
}

template <typename F>
std::vector<Mat<F>> decompose(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, const Vec<F>& x)
{
    const auto& space = rm.space();
    const Index n = space.atoms();
    if (x.size() != n) throw std::invalid_argument("decompose: claim length != atom count");
    if (!rm.has_vertices() && rm.set().kind == RepKind::polytope) {
        // No cone-level check at this size: an infeasible claim is itself the refusal certificate.
        auto pis = decompose_hrep(rm, v, Vec<F>(x - rho(rm, 0, x)));
        if (!pis) throw Refusal("decompose: X - rho_0(X) is not a sum of K_t.V, so A_0 is not predictably represented by V");
        if (auto bad = validate_decomposition(rm, v, x, *pis)) throw TheoremViolation("decompose: " + *bad);
        return *pis;
    }
    if (!is_predictably_represented(rm, v).holds)
        throw Refusal("decompose: A_0 is not predictably represented by V (run check for the certificate)");
    std::vector<PolyCone<F>> ks;
    for (int t = 0; t < space.horizon(); ++t) ks.push_back(k_cone(rm, v, t));
    std::vector<LinearMap<F>> maps(ks.size(), value_map(v));
    Vec<F> target = x - rho(rm, 0, x);
    auto parts = sum_decompose(ks, maps, target);
    if (!parts) throw TheoremViolation("decompose: X - rho_0(X) is not in the sum of the K_t.V");
    std::vector<Mat<F>> pis;
    for (const auto& p : *parts) pis.push_back(unflatten(p, n));
    if (auto bad = validate_decomposition(rm, v, x, pis)) throw TheoremViolation("decompose: " + *bad);
    return pis;
}

template <typename F>
std::optional<std::string> validate_decomposition(const RiskMeasure<F>& rm, const NumeraireVec<F>& v,
                                                  const Vec<F>& x, const std::vector<Mat<F>>& pis)
{
    const auto& space = rm.space();
    const Index n = space.atoms();
    if (static_cast<int>(pis.size()) != space.horizon()) return "expected one portfolio per t < T";
    Vec<F> total = Vec<F>::Zero(n);
    for (int t = 0; t < space.horizon(); ++t) {
        const Mat<F>& pi = pis[static_cast<std::size_t>(t)];
        if (pi.rows() != n || pi.cols() != v.width()) return "pi_" + std::to_string(t) + " has the wrong shape";
        // K_t = F_{t+1}-measurable portfolios whose value is acceptable at t
        const Partition& next = space.partition(t + 1);
        for (Index a = 0; a < n; ++a)
            if (pi.row(a) != pi.row(next.block(next.block_of(a)).front()))
                return "pi_" + std::to_string(t) + " is not F_" + std::to_string(t + 1) + "-measurable";
        Vec<F> value = portfolio_value(pi, v);
        if (!nonpositive(Vec<F>(rho(rm, t, value)))) return "pi_" + std::to_string(t) + " is not in K_" + std::to_string(t);
        total += value;
    }
    Vec<F> target = x - rho(rm, 0, x);
    if (total != target) return "sum of values " + format_vec(total) + " != X - rho_0(X) = " + format_vec(target);
    return std::nullopt;
}

#define CONERISK_INSTANTIATE(F)                                                                                  \
    template Vec<F> epsilon<F>(const RiskMeasure<F>&, const NumeraireVec<F>&, int, const Vec<F>&);               \
    template ConsistencyResult<F> is_v_time_consistent<F>(const RiskMeasure<F>&, const NumeraireVec<F>&);        \
    template RepresentabilityResult<F> is_predictably_represented<F>(const RiskMeasure<F>&, const NumeraireVec<F>&); \
    template EquivalenceReport theorem_main_report<F>(const RiskMeasure<F>&, const NumeraireVec<F>&);            \
    template std::vector<Mat<F>> decompose<F>(const RiskMeasure<F>&, const NumeraireVec<F>&, const Vec<F>&);     \
    template std::optional<std::string> validate_decomposition<F>(const RiskMeasure<F>&, const NumeraireVec<F>&, \
                                                                  const Vec<F>&, const std::vector<Mat<F>>&);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
