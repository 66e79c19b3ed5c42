/**
 * Coherent dynamic risk measures rho_t(X) = esssup_{Q in Q} E_Q[X | F_t] on a
 * finite filtered space, their acceptance cones, and the coherence axioms as
 * executable checks.
 *
 * On a block B of F_t, measures with Q(B) = 0 are skipped.  Along a segment
 * from a measure charging B to one that does not, the Q-conditional average
 * on B is constant, so the supremum is already attained among the vertices
 * that charge B.
 */
#ifndef CONERISK_RISK_HPP
#define CONERISK_RISK_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "conerisk/cone.hpp"
#include "conerisk/lp.hpp"
#include "conerisk/space.hpp"

namespace conerisk {

enum class RepKind { polytope, quad_ball };

/** The requested evaluation is not available for this kind of representing set. */
class Unsupported : public std::runtime_error
{
    public:
        explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

/**
 * A set Q of probability measures on the atoms.
 *
 * polytope: conv(vertices) and/or {q >= 0, sum q = 1, H q <= 0} with
 * homogeneous rows H.  When both are given they must agree (not checked).
 * quad_ball: {q >= 0, sum q = 1, sum q^2 <= c} with a list of members.
 */
template <typename F>
struct RepresentingSet
{
    RepKind kind = RepKind::polytope;
    std::optional<Mat<F>> vertices;   // rows are measures
    std::optional<Mat<F>> ineqs;      // rows h meaning h.q <= 0
    F radius{0};
    std::vector<Vec<F>> witnesses;

    static RepresentingSet from_vertices(Mat<F> v);
    static RepresentingSet from_inequalities(Mat<F> h);
    static RepresentingSet quad_ball(F c, std::vector<Vec<F>> witnesses);

    Index atoms() const;
};

/** Is q a member of Q?  Exact; polytope vertices go through an LP. */
template <typename F>
bool oracle_member(const RepresentingSet<F>& q_set, const Vec<F>& q);

/** Sum of q_a^2, the quantity the quadratic ball bounds. */
template <typename F>
F quad_mass(const Vec<F>& q);

template <typename F>
class RiskMeasure
{
    public:
        /**
         * Validates Q against the space: every listed measure is a probability
         * vector and Q has a member charging every atom.  Inequality-only
         * polytopes get their vertices by double description when the atom
         * count is at most `vertex_limit`.
         */
        RiskMeasure(FilteredSpace<F> space, RepresentingSet<F> q_set, Index vertex_limit = 12);

        const FilteredSpace<F>& space() const { return space_; }
        const RepresentingSet<F>& set() const { return q_; }
        bool has_vertices() const { return q_.vertices.has_value(); }
        const Mat<F>& vertices() const;
        /** A strictly positive member, kept for inequality-only polytopes. */
        const std::optional<Vec<F>>& inner_member() const { return inner_; }

        /**
         * {y >= 0 : H y <= 0, y(B) = 1} for block b of F_t, prepared once and
         * shared by every evaluation on that block (inequality-only Q).
         */
        const PreparedLp<F>& block_program(int t, Index b) const;

        /** {q >= 0 : H q <= 0, sum q = 1}, prepared once (inequality-only Q). */
        const PreparedLp<F>& measure_program() const;

    private:
        struct Programs;
        FilteredSpace<F> space_;
        RepresentingSet<F> q_;
        std::optional<Vec<F>> inner_;
        std::shared_ptr<Programs> programs_;
};

/** rho_t(X) with a maximizing measure per block of F_t. */
template <typename F>
struct RhoResult
{
    Vec<F> value;                      // F_t-measurable, one entry per atom
    std::vector<Vec<F>> argmax;        // one measure per block of F_t
};

template <typename F>
RhoResult<F> rho_detail(const RiskMeasure<F>& rm, int t, const Vec<F>& x);

template <typename F>
Vec<F> rho(const RiskMeasure<F>& rm, int t, const Vec<F>& x);

/**
 * A_t = {X : rho_t(X) <= 0}.  With vertices: one inequality 1_B q per
 * (vertex, block).  Inequality-only Q at t = 0: generated by the rows of H
 * and -e_a (Farkas).
 */
template <typename F>
PolyCone<F> acceptance_cone(const RiskMeasure<F>& rm, int t);

/** Generators of A_0* in density form: the vertex densities q/p. */
template <typename F>
Mat<F> dual_generators(const RiskMeasure<F>& rm);

struct AxiomResult
{
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string counterexample;
};

struct CoherenceReport
{
    std::vector<AxiomResult> axioms;
    bool passed() const;
};

/**
 * Cash invariance, monotonicity, conditional convexity, normalisation and
 * positive homogeneity on `samples` seeded random inputs at every t.
 */
template <typename F>
CoherenceReport coherence_suite(const RiskMeasure<F>& rm, std::size_t samples, std::uint64_t seed);

}   // namespace conerisk

#endif
