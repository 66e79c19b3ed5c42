#include "conerisk/corpus.hpp"

#include <json.hpp>

namespace conerisk {

namespace detail {
extern const char* const txcost_grid_json;
}

namespace {

Rational r(long long num, long long den = 1) { return Rational(num) / Rational(den); }

template <typename F>
Vec<F> vec(std::initializer_list<F> xs)
{
    Vec<F> v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (const auto& x : xs) v(i++) = x;
    return v;
}

template <typename F>
FilteredSpace<F> two_period_four_atoms(Vec<F> probs)
{
    return FilteredSpace<F>(std::move(probs), {Partition::trivial(4), Partition::from_blocks(4, {{0, 1}, {2, 3}}),
                                               Partition::discrete(4)});
}

std::map<std::string, bool> all_three(bool v)
{
    return {{"time_consistent", v}, {"representable", v}, {"dual_stable", v}};
}

void check_variant(std::string_view numeraire)
{
    if (numeraire != "unit" && numeraire != "paper")
        throw std::invalid_argument("unknown numeraire variant '" + std::string(numeraire) + "' (unit|paper)");
}

}   // namespace

Scenario<Rational> build_avar4(std::string_view numeraire)
{
    check_variant(numeraire);
    auto space = two_period_four_atoms<Rational>(vec<Rational>({r(1, 100), r(9, 100), r(9, 100), r(81, 100)}));
    Mat<Rational> verts(6, 4);
    verts << r(1, 2), r(1, 2), 0, 0,
             r(1, 2), 0, r(1, 2), 0,
             r(1, 2), 0, 0, r(1, 2),
             0, 1, 0, 0,
             0, 0, 1, 0,
             0, 0, 0, 1;
    // q_1 <= 1/2 written homogeneously: q_1 - (q_1 + ... + q_4)/2 <= 0
    Mat<Rational> ineqs(1, 4);
    ineqs << r(1, 2), r(-1, 2), r(-1, 2), r(-1, 2);
    RepresentingSet<Rational> q = RepresentingSet<Rational>::from_vertices(verts);
    q.ineqs = ineqs;
    bool paper = numeraire == "paper";
    Mat<Rational> v = Mat<Rational>::Ones(4, paper ? 2 : 1);
    if (paper) v(0, 1) = 3;
    auto expected = all_three(paper);
    expected["vstability_witness"] = !paper;
    return Scenario<Rational>{"avar4-" + std::string(numeraire), space, NumeraireVec<Rational>(v), q, expected};
}

Scenario<Quad2> build_haezendonck4(std::string_view numeraire)
{
    check_variant(numeraire);
    Quad2 quarter(r(1, 4)), half(r(1, 2));
    auto space = two_period_four_atoms<Quad2>(vec<Quad2>({quarter, quarter, quarter, quarter}));
    std::vector<Vec<Quad2>> witnesses{vec<Quad2>({quarter, quarter, quarter, quarter}),
                                      vec<Quad2>({half, half, 0, 0}),
                                      vec<Quad2>({half, 0, half, 0})};
    auto q = RepresentingSet<Quad2>::quad_ball(half, witnesses);
    bool paper = numeraire == "paper";
    Mat<Quad2> v = Mat<Quad2>::Ones(4, paper ? 3 : 1);
    if (paper) {
        Quad2 up(Rational(1), Rational(1));   // 1 + sqrt 2
        v(0, 1) = up;
        v(2, 2) = up;
    }
    std::map<std::string, bool> expected{{"vstability_witness", !paper}};
    return Scenario<Quad2>{"haezendonck4-" + std::string(numeraire), space, NumeraireVec<Quad2>(v), q, expected};
}

std::vector<int> txcost_grid_sizes()
{
    static const nlohmann::json grid = nlohmann::json::parse(detail::txcost_grid_json);
    std::vector<int> out;
    for (const auto& [k, _] : grid.at("grids").items()) out.push_back(std::stoi(k));
    std::sort(out.begin(), out.end());
    return out;
}

Scenario<Rational> build_txcost(int n, const Rational& lambda, const Rational& m, std::string_view numeraire)
{
    check_variant(numeraire);
    static const nlohmann::json grid = nlohmann::json::parse(detail::txcost_grid_json);
    if (m != parse_rational(grid.at("truncation").get<std::string>()))
        throw std::invalid_argument("txcost: quantiles are frozen for truncation level " +
                                    grid.at("truncation").get<std::string>() + " only");
    if (sign(lambda) <= 0 || lambda >= Rational(1)) throw std::invalid_argument("txcost: lambda must lie in (0, 1)");
    const std::string key = std::to_string(n);
    if (!grid.at("grids").contains(key)) throw std::invalid_argument("txcost: no frozen grid of size " + key);
    const auto& ex = grid.at("grids").at(key).at("exp");
    // Normalising by the grid mean makes E[exp(N - a)] = 1 hold exactly.
    std::vector<Rational> e;
    Rational mean(0);
    for (const auto& s : ex) {
        e.push_back(parse_decimal(s.get<std::string>()));
        mean += e.back();
    }
    mean /= n;
    for (auto& x : e) x /= mean;

    const Index atoms = static_cast<Index>(n) * n;
    std::vector<Index> first(static_cast<std::size_t>(atoms));
    for (Index a = 0; a < atoms; ++a) first[static_cast<std::size_t>(a)] = a / n;
    FilteredSpace<Rational> space(Vec<Rational>::Constant(atoms, Rational(1) / Rational(atoms)),
                                  {Partition::trivial(atoms), Partition::from_labels(first), Partition::discrete(atoms)});
    Mat<Rational> v = Mat<Rational>::Ones(atoms, numeraire == "paper" ? 2 : 1);
    Vec<Rational> v1(atoms);
    for (Index a = 0; a < atoms; ++a) v1(a) = e[static_cast<std::size_t>(a / n)] * e[static_cast<std::size_t>(a % n)];
    if (numeraire == "paper") v.col(1) = v1;

    const Rational up = 1 + lambda, down = 1 - lambda;
    Mat<Rational> h = Mat<Rational>::Zero(2 + 2 * n, atoms);
    for (Index a = 0; a < atoms; ++a) {
        h(0, a) = v1(a) - up;
        h(1, a) = down - v1(a);
        const Index j = a / n;
        const Rational& e2 = e[static_cast<std::size_t>(a % n)];
        h(2 + 2 * j, a) = e2 - up;
        h(3 + 2 * j, a) = down - e2;
    }
    std::map<std::string, bool> expected;
    if (numeraire == "paper") expected = all_three(true);
    return Scenario<Rational>{"txcost" + key + "-" + std::string(numeraire), space, NumeraireVec<Rational>(v),
                              RepresentingSet<Rational>::from_inequalities(h), expected};
}

namespace {

class Lcg
{
    public:
        explicit Lcg(std::uint64_t seed) : x_(seed) {}
        std::uint64_t next()
        {
            x_ = 6364136223846793005ULL * x_ + 1442695040888963407ULL;
            return x_ >> 33;
        }
        int below(int k) { return static_cast<int>(next() % static_cast<std::uint64_t>(k)); }

    private:
        std::uint64_t x_;
};

}   // namespace

Scenario<Rational> random_scenario(std::uint64_t seed)
{
    Lcg g(seed);
    const int horizon = 1 + g.below(3);
    const int max_atoms = 8;
    // parent[t][k]: the level-t parent of node k at level t+1
    std::vector<std::vector<Index>> parent;
    Index width = 1;
    for (int t = 0; t < horizon; ++t) {
        std::vector<Index> up;
        for (Index node = 0; node < width; ++node) {
            int kids = t == 0 ? 2 : 1 + g.below(2);
            Index remaining_nodes = width - node - 1;   // each still needs at least one child
            if (static_cast<Index>(up.size()) + kids + remaining_nodes > max_atoms) kids = 1;
            for (int c = 0; c < kids; ++c) up.push_back(node);
        }
        parent.push_back(up);
        width = static_cast<Index>(up.size());
    }
    const Index n = width;
    std::vector<Partition> parts(static_cast<std::size_t>(horizon + 1));
    std::vector<Index> label(static_cast<std::size_t>(n));
    for (Index a = 0; a < n; ++a) label[static_cast<std::size_t>(a)] = a;
    parts[static_cast<std::size_t>(horizon)] = Partition::discrete(n);
    for (int t = horizon - 1; t >= 0; --t) {
        for (auto& l : label) l = parent[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
        parts[static_cast<std::size_t>(t)] = Partition::from_labels(label);
    }

    Vec<Rational> probs(n);
    for (Index a = 0; a < n; ++a) probs(a) = 1 + g.below(9);
    probs /= probs.sum();

    const int d = g.below(3);
    Mat<Rational> v = Mat<Rational>::Ones(n, d + 1);
    for (int i = 1; i <= d; ++i)
        for (Index a = 0; a < n; ++a) v(a, i) = r(1 + g.below(16), 4);

    const int k = 1 + g.below(5);
    Mat<Rational> verts(k + 1, n);
    for (int j = 0; j < k; ++j) {
        Vec<Rational> w(n);
        for (Index a = 0; a < n; ++a) w(a) = g.below(10);
        if (is_zero(w.sum())) w(g.below(static_cast<int>(n))) = 1;
        verts.row(j) = (w / w.sum()).transpose();
    }
    verts.row(k) = (probs.transpose() + verts.row(0)) / Rational(2);

    return Scenario<Rational>{"random" + std::to_string(seed), FilteredSpace<Rational>(probs, parts),
                              NumeraireVec<Rational>(v), RepresentingSet<Rational>::from_vertices(verts), {}};
}

std::vector<std::string> corpus_names()
{
    std::vector<std::string> out{"avar4", "haezendonck4"};
    for (int n : txcost_grid_sizes())
        if (n >= 4 && n <= 16) out.push_back("txcost" + std::to_string(n));
    return out;
}

AnyScenario corpus_get(std::string_view name, std::string_view numeraire)
{
    if (name == "avar4") return build_avar4(numeraire);
    if (name == "haezendonck4") return build_haezendonck4(numeraire);
    if (name.rfind("txcost", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(std::string(name.substr(6)));
        } catch (const std::exception&) {
            throw std::invalid_argument("unknown corpus scenario '" + std::string(name) + "'");
        }
        return build_txcost(n, r(1, 10), Rational(3), numeraire);
    }
    if (name.rfind("random", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(std::string(name.substr(6)));
        } catch (const std::exception&) {
            throw std::invalid_argument("unknown corpus scenario '" + std::string(name) + "'");
        }
        return random_scenario(seed);
    }
    throw std::invalid_argument("unknown corpus scenario '" + std::string(name) + "'");
}

}   // namespace conerisk
