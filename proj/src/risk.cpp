#include "conerisk/risk.hpp"

#include <random>

#include "conerisk/lp.hpp"

namespace conerisk {

template <typename F>
RepresentingSet<F> RepresentingSet<F>::from_vertices(Mat<F> v)
{
    RepresentingSet s;
    s.vertices = std::move(v);
    return s;
}

template <typename F>
RepresentingSet<F> RepresentingSet<F>::from_inequalities(Mat<F> h)
{
    RepresentingSet s;
    s.ineqs = std::move(h);
    return s;
}

template <typename F>
RepresentingSet<F> RepresentingSet<F>::quad_ball(F c, std::vector<Vec<F>> witnesses)
{
    RepresentingSet s;
    s.kind = RepKind::quad_ball;
    s.radius = std::move(c);
    s.witnesses = std::move(witnesses);
    return s;
}

template <typename F>
Index RepresentingSet<F>::atoms() const
{
    if (vertices) return vertices->cols();
    if (ineqs) return ineqs->cols();
    if (!witnesses.empty()) return witnesses.front().size();
    return 0;
}

namespace {

template <typename F>
bool is_probability(const Vec<F>& q)
{
    F s(0);
    for (Index i = 0; i < q.size(); ++i) {
        if (sign(q(i)) < 0) return false;
        s += q(i);
    }
    return s == F(1);
}

template <typename F>
bool strictly_positive(const Vec<F>& q)
{
    for (Index i = 0; i < q.size(); ++i)
        if (sign(q(i)) <= 0) return false;
    return true;
}

/** Vertices of {q >= 0, sum q = 1, H q <= 0} from the extreme rays of its cone. */
template <typename F>
Mat<F> vertices_from_inequalities(const Mat<F>& h)
{
    const Index n = h.cols();
    Mat<F> rows(h.rows() + n, n);
    rows << h, Mat<F>(-Mat<F>::Identity(n, n));
    DDResult<F> dd = dd_enumerate<F>(rows, n);
    if (!dd.lineality.empty()) throw std::logic_error("representing set: cone of measures has lineality");
    std::vector<Vec<F>> out;
    for (auto& r : dd.rays) {
        F s = r.sum();
        out.push_back(r / s);
    }
    std::sort(out.begin(), out.end(), [](const Vec<F>& a, const Vec<F>& b) { return lex_less<F>(b, a); });
    return stack_rows<F>(out, n);
}

/** argmax of min_a q_a over {q >= 0, sum q = 1, H q <= 0}; nullopt when empty. */
template <typename F>
std::optional<Vec<F>> best_floor(const Mat<F>& h)
{
    const Index n = h.cols();
    LinearProgram<F> lp(n + 1);
    lp.nonneg.assign(static_cast<std::size_t>(n + 1), true);
    lp.objective(n) = F(1);
    for (Index i = 0; i < h.rows(); ++i) {
        Vec<F> row = Vec<F>::Zero(n + 1);
        row.head(n) = h.row(i).transpose();
        lp.add_ineq(row, F(0));
    }
    for (Index a = 0; a < n; ++a) {
        Vec<F> row = Vec<F>::Zero(n + 1);
        row(a) = F(-1);
        row(n) = F(1);
        lp.add_ineq(row, F(0));
    }
    Vec<F> sum = Vec<F>::Zero(n + 1);
    sum.head(n).setOnes();
    lp.add_eq(sum, F(1));
    LpSolution<F> s = lp_solve(lp);
    if (s.status == LpStatus::infeasible) return std::nullopt;
    return Vec<F>(s.point.head(n));
}

}   // namespace

template <typename F>
F quad_mass(const Vec<F>& q)
{
    F s(0);
    for (Index i = 0; i < q.size(); ++i) s += q(i) * q(i);
    return s;
}

template <typename F>
bool oracle_member(const RepresentingSet<F>& qs, const Vec<F>& q)
{
    if (q.size() != qs.atoms()) throw std::invalid_argument("oracle_member: measure length mismatch");
    if (!is_probability(q)) return false;
    if (qs.kind == RepKind::quad_ball) return sign(F(quad_mass(q) - qs.radius)) <= 0;
    if (qs.ineqs) {
        Vec<F> hq = *qs.ineqs * q;
        for (Index i = 0; i < hq.size(); ++i)
            if (sign(hq(i)) > 0) return false;
        return true;
    }
    const Mat<F>& v = *qs.vertices;
    LinearProgram<F> lp(v.rows());
    lp.nonneg.assign(static_cast<std::size_t>(v.rows()), true);
    for (Index a = 0; a < v.cols(); ++a) lp.add_eq(v.col(a), q(a));
    return lp_solve(lp).status != LpStatus::infeasible;
}

template <typename F>
RiskMeasure<F>::RiskMeasure(FilteredSpace<F> space, RepresentingSet<F> q_set, Index vertex_limit)
    : space_(std::move(space)), q_(std::move(q_set))
{
    const Index n = space_.atoms();
    if (q_.atoms() != n) throw std::invalid_argument("representing set: measure length != atom count");
    if (q_.kind == RepKind::quad_ball) {
        if (q_.witnesses.empty()) throw std::invalid_argument("representing set: quad_ball needs witnesses");
        bool positive = false;
        for (const auto& w : q_.witnesses) {
            if (w.size() != n) throw std::invalid_argument("representing set: witness length != atom count");
            if (!oracle_member(q_, w)) throw std::invalid_argument("representing set: witness " + format_vec(w) + " is not a member");
            positive = positive || strictly_positive(w);
        }
        if (!positive) throw std::invalid_argument("representing set: no strictly positive member");
        return;
    }
    if (!q_.vertices && !q_.ineqs) throw std::invalid_argument("representing set: polytope without vertices or inequalities");
    if (q_.vertices) {
        const Mat<F>& v = *q_.vertices;
        if (v.rows() == 0) throw std::invalid_argument("representing set: empty vertex list");
        Vec<F> mix = Vec<F>::Zero(n);
        for (Index i = 0; i < v.rows(); ++i) {
            Vec<F> q = v.row(i).transpose();
            if (!is_probability(q)) throw std::invalid_argument("representing set: vertex " + format_vec(q) + " is not a probability measure");
            mix += q;
        }
        if (!strictly_positive(mix)) throw std::invalid_argument("representing set: no strictly positive member");
        return;
    }
    if (oracle_member(q_, space_.probs())) {
        inner_ = space_.probs();   // P itself is the usual strictly positive member
    } else {
        auto floor = best_floor(*q_.ineqs);
        if (!floor) throw std::invalid_argument("representing set: inequalities admit no probability measure");
        if (!strictly_positive(*floor)) throw std::invalid_argument("representing set: no strictly positive member");
        inner_ = *floor;
    }
    programs_ = std::make_shared<Programs>();
    if (n <= vertex_limit) q_.vertices = vertices_from_inequalities(*q_.ineqs);
}

template <typename F>
struct RiskMeasure<F>::Programs
{
    std::mutex lock;
    std::map<std::pair<int, Index>, PreparedLp<F>> by_block;
    std::optional<PreparedLp<F>> measures;
};

template <typename F>
const PreparedLp<F>& RiskMeasure<F>::measure_program() const
{
    if (!q_.ineqs || !programs_) throw Unsupported("risk measure: the measure program needs Q in inequality form");
    std::lock_guard<std::mutex> guard(programs_->lock);
    if (!programs_->measures) {
        const Mat<F>& h = *q_.ineqs;
        const Index n = h.cols();
        LinearProgram<F> lp(n);
        lp.nonneg.assign(static_cast<std::size_t>(n), true);
        lp.ineq = h;
        lp.ineq_rhs = Vec<F>::Zero(h.rows());
        lp.add_eq(Vec<F>::Ones(n), F(1));
        programs_->measures.emplace(lp);
    }
    return *programs_->measures;
}

template <typename F>
const PreparedLp<F>& RiskMeasure<F>::block_program(int t, Index b) const
{
    if (!q_.ineqs || !programs_) throw Unsupported("risk measure: block programs need Q in inequality form");
    std::lock_guard<std::mutex> guard(programs_->lock);
    auto key = std::make_pair(t, b);
    auto it = programs_->by_block.find(key);
    if (it != programs_->by_block.end()) return it->second;
    const Mat<F>& h = *q_.ineqs;
    const Index n = h.cols();
    LinearProgram<F> lp(n);
    lp.nonneg.assign(static_cast<std::size_t>(n), true);
    lp.ineq = h;
    lp.ineq_rhs = Vec<F>::Zero(h.rows());
    Vec<F> ind = Vec<F>::Zero(n);
    for (Index a : space_.partition(t).block(b)) ind(a) = F(1);
    lp.add_eq(ind, F(1));
    return programs_->by_block.emplace(key, PreparedLp<F>(lp)).first->second;
}

template <typename F>
const Mat<F>& RiskMeasure<F>::vertices() const
{
    if (!q_.vertices) throw Unsupported("risk measure: vertices of the representing set are not available");
    return *q_.vertices;
}

template <typename F>
RhoResult<F> rho_detail(const RiskMeasure<F>& rm, int t, const Vec<F>& x)
{
    const auto& space = rm.space();
    if (x.size() != space.atoms()) throw std::invalid_argument("rho: claim length != atom count");
    if (rm.set().kind != RepKind::polytope) throw Unsupported("rho: oracle representing sets support only witness checks");
    const Partition& part = space.partition(t);
    RhoResult<F> out{Vec<F>::Zero(x.size()), {}};
    for (Index b = 0; b < part.count(); ++b) {
        const auto& atoms = part.block(b);
        std::optional<F> best;
        Vec<F> arg;
        if (rm.has_vertices()) {
            const Mat<F>& v = rm.vertices();
            for (Index k = 0; k < v.rows(); ++k) {
                F mass(0), num(0);
                for (Index a : atoms) {
                    mass += v(k, a);
                    if (!is_zero(v(k, a)) && !is_zero(x(a))) num += v(k, a) * x(a);
                }
                if (is_zero(mass)) continue;
                F val = num / mass;
                if (!best || sign(F(val - *best)) > 0) {
                    best = val;
                    arg = v.row(k).transpose();
                }
            }
        } else {
            // A claim constant on the block needs no LP: any member charging it attains the value.
            bool flat = true;
            for (Index a : atoms) flat = flat && x(a) == x(atoms.front());
            if (flat) {
                best = x(atoms.front());
                arg = *rm.inner_member();
            }
        }
        if (!best && !rm.has_vertices()) {
            // Charnes-Cooper: y in cone(Q) normalised by its mass on the block.
            Vec<F> obj = Vec<F>::Zero(x.size());
            for (Index a : atoms) obj(a) = x(a);
            LpSolution<F> s = rm.block_program(t, b).maximize(obj);
            if (s.status == LpStatus::optimal) {
                best = s.optimum;
                arg = s.point / F(s.point.sum());
            }
        }
        if (!best) throw std::logic_error("rho: no measure of the representing set charges block " + std::to_string(b));
        for (Index a : atoms) out.value(a) = *best;
        out.argmax.push_back(std::move(arg));
    }
    return out;
}

template <typename F>
Vec<F> rho(const RiskMeasure<F>& rm, int t, const Vec<F>& x)
{
    return rho_detail(rm, t, x).value;
}

template <typename F>
PolyCone<F> acceptance_cone(const RiskMeasure<F>& rm, int t)
{
    const auto& space = rm.space();
    const Index n = space.atoms();
    if (rm.set().kind != RepKind::polytope) throw Unsupported("acceptance_cone: oracle representing sets have no polyhedral acceptance cone");
    const Partition& part = space.partition(t);
    // Singleton blocks and a strictly positive member leave only x <= 0.
    if (part.count() == n) return PolyCone<F>::neg_orthant(n);
    if (rm.has_vertices()) {
        const Mat<F>& v = rm.vertices();
        std::vector<Vec<F>> rows;
        for (Index k = 0; k < v.rows(); ++k)
            for (Index b = 0; b < part.count(); ++b) {
                Vec<F> r = Vec<F>::Zero(n);
                for (Index a : part.block(b)) r(a) = v(k, a);
                if (!is_zero_vec(r)) rows.push_back(std::move(r));
            }
        return dd_convert(PolyCone<F>::from_inequalities(n, stack_rows<F>(rows, n)));
    }
    if (t != 0 || part.count() != 1)
        throw Unsupported("acceptance_cone: needs the vertices of the representing set below time 0");
    const Mat<F>& h = *rm.set().ineqs;
    Mat<F> gens(h.rows() + n, n);
    gens << h, Mat<F>(-Mat<F>::Identity(n, n));
    return PolyCone<F>::from_generators(n, gens);
}

template <typename F>
Mat<F> dual_generators(const RiskMeasure<F>& rm)
{
    const Mat<F>& v = rm.vertices();
    Mat<F> z = v;
    const Vec<F>& p = rm.space().probs();
    for (Index k = 0; k < v.rows(); ++k)
        for (Index a = 0; a < v.cols(); ++a) z(k, a) = v(k, a) / p(a);
    return z;
}

bool CoherenceReport::passed() const
{
    for (const auto& a : axioms)
        if (!a.passed) return false;
    return true;
}

namespace {

class Sampler
{
    public:
        explicit Sampler(std::uint64_t seed) : gen_(seed) {}

        Rational scalar(int lo, int hi)
        {
            std::uniform_int_distribution<int> num(lo, hi), den(1, 4);
            return Rational(num(gen_)) / den(gen_);
        }

        template <typename F>
        Vec<F> claim(Index n, int lo, int hi)
        {
            Vec<F> v(n);
            for (Index a = 0; a < n; ++a) v(a) = F(scalar(lo, hi));
            return v;
        }

        /** Random F_t-measurable claim. */
        template <typename F>
        Vec<F> measurable(const Partition& part, int lo, int hi)
        {
            Vec<F> v(part.atoms());
            for (const auto& b : part.blocks()) {
                F s(scalar(lo, hi));
                for (Index a : b) v(a) = s;
            }
            return v;
        }

    private:
        std::mt19937_64 gen_;
};

template <typename F>
bool leq(const Vec<F>& a, const Vec<F>& b)
{
    for (Index i = 0; i < a.size(); ++i)
        if (sign(F(a(i) - b(i))) > 0) return false;
    return true;
}

}   // namespace

template <typename F>
CoherenceReport coherence_suite(const RiskMeasure<F>& rm, std::size_t samples, std::uint64_t seed)
{
    Sampler rng(seed);
    const auto& space = rm.space();
    const Index n = space.atoms();
    CoherenceReport rep;
    rep.axioms = {{"cash invariance"}, {"monotonicity"}, {"conditional convexity"}, {"normalisation"}, {"positive homogeneity"}};
    auto fail = [&](std::size_t k, int t, const std::string& what) {
        if (!rep.axioms[k].passed) return;
        rep.axioms[k].passed = false;
        rep.axioms[k].counterexample = "t=" + std::to_string(t) + " " + what;
    };
    for (int t = 0; t <= space.horizon(); ++t) {
        const Partition& part = space.partition(t);
        for (std::size_t s = 0; s < samples; ++s) {
            Vec<F> x = rng.claim<F>(n, -12, 12);
            Vec<F> y = rng.claim<F>(n, -12, 12);
            Vec<F> rx = rho(rm, t, x), ry = rho(rm, t, y);

            Vec<F> m = rng.measurable<F>(part, -8, 8);
            if (rho(rm, t, Vec<F>(x + m)) != Vec<F>(rx + m)) fail(0, t, "X=" + format_vec(x) + " m=" + format_vec(m));
            ++rep.axioms[0].checked;

            Vec<F> up = x + rng.claim<F>(n, 0, 6);
            if (!leq<F>(rx, rho(rm, t, up))) fail(1, t, "X=" + format_vec(x) + " Y=" + format_vec(up));
            ++rep.axioms[1].checked;

            Vec<F> lam = rng.measurable<F>(part, 0, 4) / F(4);
            for (Index a = 0; a < n; ++a)
                if (sign(F(lam(a) - F(1))) > 0) lam(a) = F(1);
            Vec<F> mixed = lam.cwiseProduct(x) + (Vec<F>::Ones(n) - lam).cwiseProduct(y);
            Vec<F> bound = lam.cwiseProduct(rx) + (Vec<F>::Ones(n) - lam).cwiseProduct(ry);
            if (!leq<F>(rho(rm, t, mixed), bound))
                fail(2, t, "X=" + format_vec(x) + " Y=" + format_vec(y) + " lambda=" + format_vec(lam));
            ++rep.axioms[2].checked;

            if (!is_zero_vec(rho(rm, t, Vec<F>(Vec<F>::Zero(n))))) fail(3, t, "rho(0) != 0");
            ++rep.axioms[3].checked;

            Vec<F> scale = rng.measurable<F>(part, 0, 10);
            if (rho(rm, t, Vec<F>(scale.cwiseProduct(x))) != Vec<F>(scale.cwiseProduct(rx)))
                fail(4, t, "X=" + format_vec(x) + " lambda=" + format_vec(scale));
            ++rep.axioms[4].checked;
        }
    }
    return rep;
}

#define CONERISK_INSTANTIATE(F)                                                               \
    template struct RepresentingSet<F>;                                                       \
    template class RiskMeasure<F>;                                                            \
    template F quad_mass<F>(const Vec<F>&);                                                   \
    template bool oracle_member<F>(const RepresentingSet<F>&, const Vec<F>&);                 \
    template RhoResult<F> rho_detail<F>(const RiskMeasure<F>&, int, const Vec<F>&);           \
    template Vec<F> rho<F>(const RiskMeasure<F>&, int, const Vec<F>&);                        \
    template PolyCone<F> acceptance_cone<F>(const RiskMeasure<F>&, int);                      \
    template Mat<F> dual_generators<F>(const RiskMeasure<F>&);                                \
    template CoherenceReport coherence_suite<F>(const RiskMeasure<F>&, std::size_t, std::uint64_t);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
