/**
 * Finite filtered probability spaces.
 *
 * Atoms are 0..n-1.  A random vector of width w is an n x w matrix; when it
 * has to live in a flat coordinate space (cones, linear maps) it is flattened
 * component-major, so component i of atom a sits at index i*n + a.  That is
 * exactly Eigen's column-major storage of the n x w matrix.
 */
#ifndef CONERISK_SPACE_HPP
#define CONERISK_SPACE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "conerisk/linalg.hpp"

namespace conerisk {

/** A partition of {0..n-1}; block ids are assigned in order of first atom. */
class Partition
{
    public:
        Partition() = default;
        /** Validates that `blocks` cover every atom exactly once. */
        static Partition from_blocks(Index atoms, const std::vector<std::vector<Index>>& blocks);
        static Partition from_labels(const std::vector<Index>& labels);
        static Partition trivial(Index atoms);
        static Partition discrete(Index atoms);

        Index atoms() const { return static_cast<Index>(block_of_.size()); }
        Index count() const { return static_cast<Index>(blocks_.size()); }
        Index block_of(Index atom) const { return block_of_[static_cast<std::size_t>(atom)]; }
        const std::vector<Index>& block(Index b) const { return blocks_[static_cast<std::size_t>(b)]; }
        const std::vector<std::vector<Index>>& blocks() const { return blocks_; }

        /** Every block of *this lies inside a block of `coarser`. */
        bool refines(const Partition& coarser) const;

        bool operator==(const Partition& o) const { return block_of_ == o.block_of_; }

    private:
        std::vector<Index> block_of_;
        std::vector<std::vector<Index>> blocks_;
};

template <typename F>
class FilteredSpace
{
    public:
        FilteredSpace() = default;
        /**
         * Throws std::invalid_argument unless probabilities are positive and sum
         * to 1, partitions refine each other and the last one is discrete.
         */
        FilteredSpace(Vec<F> probs, std::vector<Partition> partitions);

        Index atoms() const { return probs_.size(); }
        int horizon() const { return static_cast<int>(parts_.size()) - 1; }
        const Vec<F>& probs() const { return probs_; }
        const Partition& partition(int t) const;
        const std::vector<Partition>& partitions() const { return parts_; }

        /** Sum of `weights` over block b of partition t. */
        F mass(int t, Index b, const Vec<F>& weights) const;
        F mass(int t, Index b) const { return mass(t, b, probs_); }

        /** Pairing weights for width-w flattened vectors: probs repeated w times. */
        Vec<F> pairing_weights(Index width) const;

        template <typename G> FilteredSpace<G> cast() const;

    private:
        Vec<F> probs_;
        std::vector<Partition> parts_;
};

/** Conditional expectation together with the atoms on which it is defined. */
template <typename F>
struct Conditioned
{
    Mat<F> values;                   // n x w; zero where undefined
    std::vector<bool> defined;       // per atom

    bool all_defined() const;
};

/**
 * Blockwise average of the columns of X over partition t, weighted by
 * `under` (P when absent).  Blocks of zero `under`-mass are undefined.
 */
template <typename F>
Conditioned<F> cond_expect(const FilteredSpace<F>& space, const Mat<F>& x, int t,
                           const std::optional<Vec<F>>& under = std::nullopt);

/** Shorthand for a width-1 claim under P (always defined). */
template <typename F>
Vec<F> cond_expect_claim(const FilteredSpace<F>& space, const Vec<F>& x, int t);

/** atom -> stopping time value */
using StoppingTime = std::vector<int>;

template <typename F>
bool is_adapted(const FilteredSpace<F>& space, const StoppingTime& tau);

/** On {tau = t} equals cond_expect(..., t).  Throws for a non-adapted tau. */
template <typename F>
Conditioned<F> cond_expect_stopped(const FilteredSpace<F>& space, const Mat<F>& x,
                                   const StoppingTime& tau,
                                   const std::optional<Vec<F>>& under = std::nullopt);

/** The stopping-time count exceeds the enumeration cap. */
class CapExceeded : public std::runtime_error
{
    public:
        explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/** 10^6, or the value of CONERISK_CAP when that is set to a positive integer. */
std::size_t default_stopping_cap();

template <typename F>
Integer count_stopping_times(const FilteredSpace<F>& space);

/**
 * All adapted stopping times.  Per block the order is "stop here" first, then
 * the lexicographic product of the children's choices.
 */
template <typename F>
std::vector<StoppingTime> enumerate_stopping_times(const FilteredSpace<F>& space,
                                                   std::optional<std::size_t> cap = std::nullopt);

/** E[. | F_t] as an (n w) x (n w) matrix on flattened width-w vectors. */
template <typename F>
Mat<F> cond_expect_map(const FilteredSpace<F>& space, int t, Index width);

/** Rows e_i (x) 1_B over the blocks B of partition t: a basis of the F_t-measurable vectors. */
template <typename F>
Mat<F> measurable_basis(const FilteredSpace<F>& space, int t, Index width);

/** Indicator of block b of partition t, repeated across `width` components. */
template <typename F>
Vec<F> block_indicator(const FilteredSpace<F>& space, int t, Index b, Index width);

template <typename F>
Vec<F> flatten(const Mat<F>& x)
{
    return Eigen::Map<const Vec<F>>(x.data(), x.size());
}

template <typename F>
Mat<F> unflatten(const Vec<F>& v, Index atoms)
{
    return Eigen::Map<const Mat<F>>(v.data(), atoms, v.size() / atoms);
}

template <typename F>
template <typename G>
FilteredSpace<G> FilteredSpace<F>::cast() const
{
    Vec<G> p(probs_.size());
    for (Index i = 0; i < probs_.size(); ++i) p(i) = G(probs_(i));
    return FilteredSpace<G>(p, parts_);
}

}   // namespace conerisk

#endif
