/**
 * Exact polyhedral cones in coordinate space F^m.
 *
 * A cone is held by generators (rows g: the cone is {sum lambda_k g_k,
 * lambda >= 0}), by homogeneous inequalities (rows h: the cone is
 * {x : h.x <= 0}), or by both.  Linear subspaces and lineality are written
 * as +-pairs of generators, and equations as +-pairs of inequalities.
 *
 * Conversion between the two descriptions is the double description method;
 * every other operation works on whichever description makes it a
 * concatenation or a matrix product, converting only when it must.
 */
#ifndef CONERISK_CONE_HPP
#define CONERISK_CONE_HPP

#include <optional>
#include <string>
#include <vector>

#include "conerisk/linalg.hpp"

namespace conerisk {

template <typename F>
class PolyCone
{
    public:
        PolyCone() = default;

        static PolyCone from_generators(Index dim, const Mat<F>& gens);
        static PolyCone from_inequalities(Index dim, const Mat<F>& ineqs);
        /** Both descriptions; the caller vouches that they describe one cone. */
        static PolyCone from_both(Index dim, const Mat<F>& gens, const Mat<F>& ineqs);

        /** The whole space F^dim. */
        static PolyCone full(Index dim);
        /** The cone {0}. */
        static PolyCone zero(Index dim);
        /** The nonnegative orthant. */
        static PolyCone orthant(Index dim);
        /** The nonpositive orthant. */
        static PolyCone neg_orthant(Index dim);

        Index dim() const { return dim_; }
        bool has_generators() const { return gens_.has_value(); }
        bool has_inequalities() const { return ineqs_.has_value(); }
        const Mat<F>& generators() const;
        const Mat<F>& inequalities() const;

        PolyCone without_generators() const;
        PolyCone without_inequalities() const;

    private:
        Index dim_ = 0;
        std::optional<Mat<F>> gens_;
        std::optional<Mat<F>> ineqs_;
};

/** Shape rows x cols; maps x in F^cols to L x in F^rows. */
template <typename F> using LinearMap = Mat<F>;

/** Result of the raw double description run on {x : H x <= 0}. */
template <typename F>
struct DDResult
{
    std::vector<Vec<F>> rays;        // extreme rays modulo lineality
    std::vector<Vec<F>> lineality;   // basis of the lineality space
};

/** Double description on an inequality matrix (rows h, meaning h.x <= 0). */
template <typename F>
DDResult<F> dd_enumerate(const Mat<F>& ineqs, Index dim);

/**
 * Returns the cone with both descriptions present and minimal: extreme rays
 * plus a +-basis of the lineality space, facets plus a +-basis of the
 * equations.  Throws std::invalid_argument for dimension 0.
 */
template <typename F>
PolyCone<F> dd_convert(const PolyCone<F>& c);

template <typename F>
PolyCone<F> ensure_generators(const PolyCone<F>& c);

template <typename F>
PolyCone<F> ensure_inequalities(const PolyCone<F>& c);

/**
 * {z : sum_k w_k z_k x_k <= 0 for all x in C}.  Generators of C become
 * inequality rows w*g; inequality rows h of C become generators h/w.
 */
template <typename F>
PolyCone<F> dual_cone(const PolyCone<F>& c, const Vec<F>& weights);

/** Sum of cones (union of generators).  Finite polyhedral sums are closed. */
template <typename F>
PolyCone<F> minkowski_sum(const std::vector<PolyCone<F>>& cones);

template <typename F>
PolyCone<F> intersect(const std::vector<PolyCone<F>>& cones);

template <typename F>
PolyCone<F> linear_image(const LinearMap<F>& map, const PolyCone<F>& c);

template <typename F>
PolyCone<F> linear_preimage(const LinearMap<F>& map, const PolyCone<F>& c);

/** Membership; by inequality evaluation when available, otherwise by LP. */
template <typename F>
bool cone_member(const PolyCone<F>& c, const Vec<F>& x);

/** First inequality of `c` violated by x; requires an H-description. */
template <typename F>
std::optional<Vec<F>> violated_inequality(const PolyCone<F>& c, const Vec<F>& x);

/** A generator of one cone that the other cone misses. */
template <typename F>
struct SeparationWitness
{
    Vec<F> point;                        // generator outside the other cone
    std::optional<Vec<F>> violated;      // inequality of the other cone it violates
    int outside_of = 0;                  // 1 or 2: the cone that misses `point`
};

template <typename F>
struct ConeComparison
{
    bool equal = false;
    std::optional<SeparationWitness<F>> witness;
    explicit operator bool() const { return equal; }
};

/**
 * Is `inner` a subset of `outer`?  Generators of `inner` are tested against
 * the inequalities of `outer` (or by LP when `outer` has none).  An
 * inequality-only `inner` is tested row by row: max h.x over inner with
 * h.x <= 1; a positive optimum yields the witness point.
 */
template <typename F>
ConeComparison<F> cone_includes(const PolyCone<F>& outer, const PolyCone<F>& inner);

/** Equality by mutual inclusion. */
template <typename F>
ConeComparison<F> cone_equal(const PolyCone<F>& a, const PolyCone<F>& b);

/**
 * Finds y_k in C_k with sum_k L_k y_k = x, or nothing.  Each cone enters
 * through its inequalities, so no conversion is needed.  The returned point
 * is the simplex vertex reached under Bland's rule.
 */
template <typename F>
std::optional<std::vector<Vec<F>>> sum_decompose(const std::vector<PolyCone<F>>& cones,
                                                 const std::vector<LinearMap<F>>& maps,
                                                 const Vec<F>& x);

/**
 * A point x of sum_k L_k C_k with h.x > 0, or nothing when h.x <= 0 on the
 * whole sum.  Decided by one LP (h.x capped at 1).
 */
template <typename F>
std::optional<Vec<F>> sum_separation(const std::vector<PolyCone<F>>& cones,
                                     const std::vector<LinearMap<F>>& maps,
                                     const Vec<F>& h);

/**
 * One generator ("g ...") or inequality ("h ...") per line, sorted, scalars
 * in canonical text form.
 */
template <typename F>
std::string dump(const PolyCone<F>& c);

}   // namespace conerisk

#endif
