/**
 * JSON forms of scalars, vectors and scenarios.
 *
 * Rationals are strings "p/q" or "p"; elements of Q(sqrt 2) are
 * {"a": "p/q", "b": "r/s"} (a plain string is accepted for b = 0).  Scenario:
 *   {"name": ..., "field": "rational" | "quad2",
 *    "space": {"atoms": n, "probs": [...], "filtration": [[[0, 1], [2, 3]], ...]},
 *    "numeraires": [[v0 per atom], [v1 per atom], ...],
 *    "representing_set": {"type": "polytope", "vertices": [[...]], "ineqs": [[...]]}
 *                      | {"type": "quad_ball", "c": ..., "witnesses": [[...]]},
 *    "expected": {"time_consistent": true, ...}}
 * Inequality rows h mean h.q <= 0 over measures q.
 */
#ifndef CONERISK_IO_HPP
#define CONERISK_IO_HPP

#include <json.hpp>
#include <string>

#include "conerisk/corpus.hpp"

namespace conerisk {

using Json = nlohmann::ordered_json;

/** Malformed or inconsistent input; the CLI maps it to exit code 2. */
class InputError : public std::runtime_error
{
    public:
        explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

Json scalar_to_json(const Rational& x);
Json scalar_to_json(const Quad2& x);

template <typename F>
F scalar_from_json(const Json& j);

template <typename F>
Json vec_to_json(const Vec<F>& v);

/** Rows of a matrix as a list of vectors. */
template <typename F>
Json rows_to_json(const Mat<F>& m);

/** `len` < 0 accepts any length. */
template <typename F>
Vec<F> vec_from_json(const Json& j, Index len = -1);

template <typename F>
Json scenario_to_json(const Scenario<F>& s);

/** Validates everything the constructors validate and rethrows as InputError. */
AnyScenario scenario_from_json(const Json& j);

AnyScenario load_scenario_file(const std::string& path);

}   // namespace conerisk

#endif
