#include "conerisk/space.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace conerisk {

// ---------------------------------------------------------------- Partition

Partition Partition::from_labels(const std::vector<Index>& labels)
{
    Partition p;
    p.block_of_.assign(labels.size(), -1);
    std::vector<std::pair<Index, Index>> seen;   // label -> id
    for (std::size_t a = 0; a < labels.size(); ++a) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == labels[a]; });
        Index id;
        if (it == seen.end()) {
            id = static_cast<Index>(seen.size());
            seen.emplace_back(labels[a], id);
            p.blocks_.emplace_back();
        } else {
            id = it->second;
        }
        p.block_of_[a] = id;
        p.blocks_[static_cast<std::size_t>(id)].push_back(static_cast<Index>(a));
    }
    return p;
}

Partition Partition::from_blocks(Index atoms, const std::vector<std::vector<Index>>& blocks)
{
    if (atoms <= 0) throw std::invalid_argument("partition: no atoms");
    std::vector<Index> label(static_cast<std::size_t>(atoms), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw std::invalid_argument("partition: empty block");
        for (Index a : blocks[b]) {
            if (a < 0 || a >= atoms)
                throw std::invalid_argument("partition: atom " + std::to_string(a) + " out of range");
            if (label[static_cast<std::size_t>(a)] >= 0)
                throw std::invalid_argument("partition: atom " + std::to_string(a) + " in two blocks");
            label[static_cast<std::size_t>(a)] = static_cast<Index>(b);
        }
    }
    for (std::size_t a = 0; a < label.size(); ++a)
        if (label[a] < 0) throw std::invalid_argument("partition: atom " + std::to_string(a) + " not covered");
    return from_labels(label);
}

Partition Partition::trivial(Index atoms)
{
    return from_labels(std::vector<Index>(static_cast<std::size_t>(atoms), 0));
}

Partition Partition::discrete(Index atoms)
{
    std::vector<Index> l(static_cast<std::size_t>(atoms));
    for (std::size_t a = 0; a < l.size(); ++a) l[a] = static_cast<Index>(a);
    return from_labels(l);
}

bool Partition::refines(const Partition& coarser) const
{
    if (coarser.atoms() != atoms()) return false;
    for (const auto& b : blocks_)
        for (Index a : b)
            if (coarser.block_of(a) != coarser.block_of(b.front())) return false;
    return true;
}

// ------------------------------------------------------------ FilteredSpace

template <typename F>
FilteredSpace<F>::FilteredSpace(Vec<F> probs, std::vector<Partition> partitions)
    : probs_(std::move(probs)), parts_(std::move(partitions))
{
    const Index n = probs_.size();
    if (n == 0) throw std::invalid_argument("space: no atoms");
    F total(0);
    for (Index a = 0; a < n; ++a) {
        if (sign(probs_(a)) <= 0)
            throw std::invalid_argument("space: probability of atom " + std::to_string(a) + " is not positive");
        total += probs_(a);
    }
    if (total != F(1)) throw std::invalid_argument("space: probabilities sum to " + format_scalar(total) + ", not 1");
    if (parts_.empty()) throw std::invalid_argument("space: empty filtration");
    for (std::size_t t = 0; t < parts_.size(); ++t) {
        if (parts_[t].atoms() != n) throw std::invalid_argument("space: partition " + std::to_string(t) + " has wrong size");
        if (t > 0 && !parts_[t].refines(parts_[t - 1]))
            throw std::invalid_argument("space: partition " + std::to_string(t) + " does not refine its predecessor");
    }
    if (parts_.back().count() != n) throw std::invalid_argument("space: final partition is not discrete");
}

template <typename F>
const Partition& FilteredSpace<F>::partition(int t) const
{
    if (t < 0 || t > horizon()) throw std::out_of_range("space: time " + std::to_string(t) + " outside 0.." + std::to_string(horizon()));
    return parts_[static_cast<std::size_t>(t)];
}

template <typename F>
F FilteredSpace<F>::mass(int t, Index b, const Vec<F>& weights) const
{
    F s(0);
    for (Index a : partition(t).block(b)) s += weights(a);
    return s;
}

template <typename F>
Vec<F> FilteredSpace<F>::pairing_weights(Index width) const
{
    Vec<F> w(atoms() * width);
    for (Index i = 0; i < width; ++i) w.segment(i * atoms(), atoms()) = probs_;
    return w;
}

template <typename F>
bool Conditioned<F>::all_defined() const
{
    return std::all_of(defined.begin(), defined.end(), [](bool b) { return b; });
}

namespace {

/** Averages the rows of x over `atoms` with weights w(a) p-style; writes into out. */
template <typename F>
bool average_block(const std::vector<Index>& atoms, const Mat<F>& x, const Vec<F>& w, Conditioned<F>& out)
{
    F mass(0);
    for (Index a : atoms) mass += w(a);
    if (is_zero(mass)) {
        for (Index a : atoms) {
            out.values.row(a).setZero();
            out.defined[static_cast<std::size_t>(a)] = false;
        }
        return false;
    }
    for (Index j = 0; j < x.cols(); ++j) {
        F s(0);
        for (Index a : atoms)
            if (!is_zero(w(a)) && !is_zero(x(a, j))) s += w(a) * x(a, j);
        s /= mass;
        for (Index a : atoms) out.values(a, j) = s;
    }
    for (Index a : atoms) out.defined[static_cast<std::size_t>(a)] = true;
    return true;
}

template <typename F>
const Vec<F>& pick_weights(const FilteredSpace<F>& space, const std::optional<Vec<F>>& under)
{
    if (!under) return space.probs();
    if (under->size() != space.atoms()) throw std::invalid_argument("cond_expect: measure length mismatch");
    return *under;
}

}   // namespace

template <typename F>
Conditioned<F> cond_expect(const FilteredSpace<F>& space, const Mat<F>& x, int t,
                           const std::optional<Vec<F>>& under)
{
    if (x.rows() != space.atoms()) throw std::invalid_argument("cond_expect: row count != atom count");
    const Vec<F>& w = pick_weights(space, under);
    Conditioned<F> out{Mat<F>::Zero(x.rows(), x.cols()), std::vector<bool>(static_cast<std::size_t>(x.rows()), false)};
    for (const auto& b : space.partition(t).blocks()) average_block(b, x, w, out);
    return out;
}

template <typename F>
Vec<F> cond_expect_claim(const FilteredSpace<F>& space, const Vec<F>& x, int t)
{
    Mat<F> m = x;
    return cond_expect(space, m, t).values.col(0);
}

template <typename F>
bool is_adapted(const FilteredSpace<F>& space, const StoppingTime& tau)
{
    if (static_cast<Index>(tau.size()) != space.atoms()) return false;
    const int horizon = space.horizon();
    for (int v : tau)
        if (v < 0 || v > horizon) return false;
    // {tau <= t} must be a union of F_t blocks: a block that meets it lies
    // inside it.  By induction tau is then constant on every block of {tau = t}.
    for (int t = 0; t <= horizon; ++t) {
        for (const auto& b : space.partition(t).blocks()) {
            bool any = false, all = true;
            for (Index a : b) {
                bool hit = tau[static_cast<std::size_t>(a)] <= t;
                any = any || hit;
                all = all && hit;
            }
            if (any && !all) return false;
        }
    }
    return true;
}

template <typename F>
Conditioned<F> cond_expect_stopped(const FilteredSpace<F>& space, const Mat<F>& x,
                                   const StoppingTime& tau, const std::optional<Vec<F>>& under)
{
    if (!is_adapted(space, tau)) throw std::invalid_argument("cond_expect_stopped: stopping time is not adapted");
    if (x.rows() != space.atoms()) throw std::invalid_argument("cond_expect_stopped: row count != atom count");
    const Vec<F>& w = pick_weights(space, under);
    Conditioned<F> out{Mat<F>::Zero(x.rows(), x.cols()), std::vector<bool>(static_cast<std::size_t>(x.rows()), false)};
    for (int t = 0; t <= space.horizon(); ++t) {
        for (const auto& b : space.partition(t).blocks()) {
            if (tau[static_cast<std::size_t>(b.front())] != t) continue;
            average_block(b, x, w, out);
        }
    }
    return out;
}

// ------------------------------------------------------------ stopping times

std::size_t default_stopping_cap()
{
    if (const char* env = std::getenv("CONERISK_CAP")) {
        try {
            long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return 1000000;
}

namespace {

template <typename F>
std::vector<Index> children(const FilteredSpace<F>& space, int t, Index b)
{
    std::vector<Index> out;
    const Partition& next = space.partition(t + 1);
    for (Index a : space.partition(t).block(b)) {
        Index c = next.block_of(a);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <typename F>
Integer count_node(const FilteredSpace<F>& space, int t, Index b)
{
    if (t == space.horizon()) return Integer(1);
    Integer prod(1);
    for (Index c : children(space, t, b)) prod *= count_node(space, t + 1, c);
    return prod + 1;
}

/** Assignments restricted to the node's atoms, each as (atom, time) pairs. */
using Partial = std::vector<std::pair<Index, int>>;

std::vector<Partial> product(const std::vector<std::vector<Partial>>& parts)
{
    std::vector<Partial> acc{Partial{}};
    for (const auto& options : parts) {
        std::vector<Partial> next;
        next.reserve(acc.size() * options.size());
        for (const auto& a : acc)
            for (const auto& o : options) {
                Partial p = a;
                p.insert(p.end(), o.begin(), o.end());
                next.push_back(std::move(p));
            }
        acc = std::move(next);
    }
    return acc;
}

template <typename F>
std::vector<Partial> enumerate_node(const FilteredSpace<F>& space, int t, Index b)
{
    std::vector<Partial> out;
    Partial here;
    for (Index a : space.partition(t).block(b)) here.emplace_back(a, t);
    out.push_back(std::move(here));
    if (t == space.horizon()) return out;
    std::vector<std::vector<Partial>> parts;
    for (Index c : children(space, t, b)) parts.push_back(enumerate_node(space, t + 1, c));
    for (auto& p : product(parts)) out.push_back(std::move(p));
    return out;
}

}   // namespace

template <typename F>
Integer count_stopping_times(const FilteredSpace<F>& space)
{
    Integer prod(1);
    for (Index b = 0; b < space.partition(0).count(); ++b) prod *= count_node(space, 0, b);
    return prod;
}

template <typename F>
std::vector<StoppingTime> enumerate_stopping_times(const FilteredSpace<F>& space, std::optional<std::size_t> cap)
{
    const std::size_t limit = cap.value_or(default_stopping_cap());
    Integer count = count_stopping_times(space);
    if (count > Integer(limit))
        throw CapExceeded("stopping-time enumeration: " + count.str() + " stopping times exceed the cap of "
                          + std::to_string(limit) + " (raise it with --cap or CONERISK_CAP)");
    std::vector<std::vector<Partial>> roots;
    for (Index b = 0; b < space.partition(0).count(); ++b) roots.push_back(enumerate_node(space, 0, b));
    std::vector<StoppingTime> out;
    for (const auto& p : product(roots)) {
        StoppingTime tau(static_cast<std::size_t>(space.atoms()), 0);
        for (const auto& [a, t] : p) tau[static_cast<std::size_t>(a)] = t;
        out.push_back(std::move(tau));
    }
    return out;
}

// -------------------------------------------------------------- linear maps

template <typename F>
Mat<F> cond_expect_map(const FilteredSpace<F>& space, int t, Index width)
{
    const Index n = space.atoms();
    Mat<F> e = Mat<F>::Zero(n * width, n * width);
    const Partition& part = space.partition(t);
    for (Index b = 0; b < part.count(); ++b) {
        F mass = space.mass(t, b);
        for (Index a : part.block(b))
            for (Index c : part.block(b)) {
                F w = space.probs()(c) / mass;
                for (Index i = 0; i < width; ++i) e(i * n + a, i * n + c) = w;
            }
    }
    return e;
}

template <typename F>
Mat<F> measurable_basis(const FilteredSpace<F>& space, int t, Index width)
{
    const Partition& part = space.partition(t);
    const Index n = space.atoms();
    Mat<F> basis = Mat<F>::Zero(part.count() * width, n * width);
    for (Index i = 0; i < width; ++i)
        for (Index b = 0; b < part.count(); ++b)
            for (Index a : part.block(b)) basis(i * part.count() + b, i * n + a) = F(1);
    return basis;
}

template <typename F>
Vec<F> block_indicator(const FilteredSpace<F>& space, int t, Index b, Index width)
{
    const Index n = space.atoms();
    Vec<F> v = Vec<F>::Zero(n * width);
    for (Index a : space.partition(t).block(b))
        for (Index i = 0; i < width; ++i) v(i * n + a) = F(1);
    return v;
}

#define CONERISK_INSTANTIATE(F)                                                                        \
    template class FilteredSpace<F>;                                                                   \
    template struct Conditioned<F>;                                                                    \
    template Conditioned<F> cond_expect<F>(const FilteredSpace<F>&, const Mat<F>&, int,                \
                                           const std::optional<Vec<F>>&);                              \
    template Vec<F> cond_expect_claim<F>(const FilteredSpace<F>&, const Vec<F>&, int);                 \
    template bool is_adapted<F>(const FilteredSpace<F>&, const StoppingTime&);                         \
    template Conditioned<F> cond_expect_stopped<F>(const FilteredSpace<F>&, const Mat<F>&,             \
                                                   const StoppingTime&, const std::optional<Vec<F>>&); \
    template Integer count_stopping_times<F>(const FilteredSpace<F>&);                                 \
    template std::vector<StoppingTime> enumerate_stopping_times<F>(const FilteredSpace<F>&,            \
                                                                   std::optional<std::size_t>);        \
    template Mat<F> cond_expect_map<F>(const FilteredSpace<F>&, int, Index);                           \
    template Mat<F> measurable_basis<F>(const FilteredSpace<F>&, int, Index);                          \
    template Vec<F> block_indicator<F>(const FilteredSpace<F>&, int, Index, Index);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
