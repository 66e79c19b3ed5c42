// conerisk: command-line front end.
//
// Exit codes: 0 ok, 1 verdict mismatch or refusal, 2 input error,
// 3 internal theorem violation.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "conerisk/consistency.hpp"
#include "conerisk/corpus.hpp"
#include "conerisk/io.hpp"

using namespace conerisk;

namespace {

enum Exit { ok = 0, mismatch = 1, input_error = 2, violation = 3 };

struct Source
{
    std::string corpus, scenario, numeraire = "unit";
    std::uint64_t seed = 0;
    bool seeded = false;
    bool json = false;
};

struct Options
{
    Source src;
    std::string expect, claim, q, q_prime, tau, name;
    int t = 0;
    std::optional<std::size_t> cap;
};

AnyScenario load(const Source& s)
{
    if (!s.scenario.empty()) return load_scenario_file(s.scenario);
    std::string name = s.corpus;
    if (name == "random") {
        if (!s.seeded) throw InputError("--corpus random needs --seed");
        name += std::to_string(s.seed);
    }
    try {
        return corpus_get(name, s.numeraire);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

// Inline JSON, or the name of a file holding the same JSON.
Json json_arg(const std::string& text, const char* what)
{
    if (text.empty()) throw InputError(std::string("missing --") + what);
    auto parsed = Json::parse(text, nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    std::ifstream in(text);
    if (!in) throw InputError(std::string("--") + what + ": neither JSON nor a readable file: " + text);
    parsed = Json::parse(in, nullptr, false);
    if (parsed.is_discarded()) throw InputError(std::string("--") + what + ": '" + text + "' is not valid JSON");
    return parsed;
}

template <typename F>
Vec<F> claim_arg(const std::string& text, Index atoms, const char* what = "claim")
{
    return vec_from_json<F>(json_arg(text, what), atoms);
}

std::vector<bool> parse_expect(const std::string& s)
{
    std::vector<bool> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "true" || item == "1") out.push_back(true);
        else if (item == "false" || item == "0") out.push_back(false);
        else throw InputError("--expect: '" + item + "' is not true or false");
    }
    return out;
}

std::string atoms_text(const std::vector<Index>& atoms)
{
    std::string s = "{";
    for (std::size_t i = 0; i < atoms.size(); ++i) s += (i ? "," : "") + std::to_string(atoms[i]);
    return s + "}";
}

std::string tau_text(const StoppingTime& tau)
{
    std::string s = "(";
    for (std::size_t i = 0; i < tau.size(); ++i) s += (i ? ", " : "") + std::to_string(tau[i]);
    return s + ")";
}

Json optional_json(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

template <typename F>
Json rows_json(const Mat<F>& m)
{
    return rows_to_json<F>(m);
}

void print(const Json& j, const std::string& text, bool json)
{
    if (json) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

// ---------------------------------------------------------------- check

template <typename F>
int check(const Scenario<F>& s, const Options& o)
{
    Json j;
    std::ostringstream text;
    j["scenario"] = s.name;
    text << "scenario: " << s.name << "\n";
    std::vector<std::pair<std::string, std::optional<bool>>> verdicts;
    auto rm = s.risk_measure();

    if (rm.set().kind == RepKind::polytope) {
        EquivalenceReport r = theorem_main_report(rm, s.numeraires);
        text << format_report(r);
        j["route"] = r.route;
        j["time_consistent"] = optional_json(r.time_consistent);
        j["representable"] = optional_json(r.representable);
        j["dual_stable"] = optional_json(r.dual_stable);
        j["agreement"] = r.agreement;
        j["certificates"] = r.certificates;
        verdicts = {{"time_consistent", r.time_consistent}, {"representable", r.representable}, {"dual_stable", r.dual_stable}};
    }

    // The pasting search needs a finite candidate list: vertices or witnesses.
    if (rm.set().kind == RepKind::quad_ball || rm.has_vertices()) {
        try {
            auto w = vstability_witness_search(rm, s.numeraires, o.cap);
            if (w) {
                text << "witness: tau=" << tau_text(w->tau) << " q#" << w->first << "=" << format_vec(w->q) << " q'#"
                     << w->second << "=" << format_vec(w->q_prime) << " pasted=" << format_vec(w->pasted) << " ("
                     << w->violated << ")\n";
                j["witness"] = Json{{"tau", w->tau},
                                    {"first", w->first},
                                    {"second", w->second},
                                    {"q", vec_to_json<F>(w->q)},
                                    {"q_prime", vec_to_json<F>(w->q_prime)},
                                    {"pasted", vec_to_json<F>(w->pasted)},
                                    {"violation", w->violated}};
            } else {
                text << "witness: none\n";
                j["witness"] = nullptr;
            }
            verdicts.emplace_back("vstability_witness", w.has_value());
        } catch (const CapExceeded& e) {
            text << "witness: skipped (" << e.what() << ")\n";
            j["witness"] = Json{{"skipped", e.what()}};
        }
    } else {
        text << "witness: skipped (no finite candidate list for Q)\n";
        j["witness"] = Json{{"skipped", "no finite candidate list for Q"}};
    }

    int code = ok;
    if (!o.expect.empty()) {
        auto want = parse_expect(o.expect);
        if (want.size() > verdicts.size())
            throw InputError("--expect lists " + std::to_string(want.size()) + " verdicts, the check produced " +
                             std::to_string(verdicts.size()));
        for (std::size_t i = 0; i < want.size(); ++i)
            if (verdicts[i].second != want[i]) {   // undecided never matches
                text << "mismatch: " << verdicts[i].first << " expected " << (want[i] ? "true" : "false") << "\n";
                code = mismatch;
            }
    } else {
        for (const auto& [k, v] : verdicts) {
            auto it = s.expected.find(k);
            if (it != s.expected.end() && it->second != v) {
                text << "mismatch: " << k << " expected " << (it->second ? "true" : "false") << "\n";
                code = mismatch;
            }
        }
    }
    j["exit"] = code;
    print(j, text.str(), o.src.json);
    return code;
}

// ---------------------------------------------------------------- eval

template <typename F>
int eval(const Scenario<F>& s, const Options& o)
{
    auto rm = s.risk_measure();
    const auto& space = s.space;
    if (o.t < 0 || o.t > space.horizon()) throw InputError("--t must lie in 0.." + std::to_string(space.horizon()));
    Vec<F> x = claim_arg<F>(o.claim, space.atoms());
    Vec<F> r = rho(rm, o.t, x);
    Vec<F> e = epsilon(rm, s.numeraires, o.t, x);
    const Partition& part = space.partition(o.t);
    Json j{{"scenario", s.name}, {"t", o.t}, {"claim", vec_to_json<F>(x)}};
    Json blocks = Json::array();
    std::ostringstream text;
    text << "scenario: " << s.name << "\nt: " << o.t << "\nclaim: " << format_vec(x) << "\n";
    for (Index b = 0; b < part.count(); ++b) {
        Index a = part.block(b).front();
        blocks.push_back(Json{{"atoms", part.block(b)}, {"rho", scalar_to_json(r(a))}, {"epsilon", scalar_to_json(e(a))}});
        text << "block " << atoms_text(part.block(b)) << ": rho=" << format_scalar(r(a)) << " epsilon=" << format_scalar(e(a))
             << "\n";
    }
    j["blocks"] = blocks;
    j["rho"] = vec_to_json<F>(r);
    j["epsilon"] = vec_to_json<F>(e);
    print(j, text.str(), o.src.json);
    return ok;
}

// ---------------------------------------------------------------- decompose

template <typename F>
int decompose_cmd(const Scenario<F>& s, const Options& o)
{
    auto rm = s.risk_measure();
    Vec<F> x = claim_arg<F>(o.claim, s.space.atoms());
    std::vector<Mat<F>> pis = decompose(rm, s.numeraires, x);
    auto problem = validate_decomposition(rm, s.numeraires, x, pis);
    if (problem) throw TheoremViolation("decompose produced an invalid split: " + *problem);
    Json j{{"scenario", s.name}, {"claim", vec_to_json<F>(x)}, {"rho0", scalar_to_json(rho(rm, 0, x)(0))}};
    Json list = Json::array();
    std::ostringstream text;
    text << "scenario: " << s.name << "\nclaim: " << format_vec(x) << "\nrho_0: " << format_scalar(rho(rm, 0, x)(0)) << "\n";
    for (std::size_t t = 0; t < pis.size(); ++t) {
        list.push_back(rows_json<F>(pis[t]));
        text << "pi_" << t << ":\n";
        for (Index a = 0; a < pis[t].rows(); ++a) text << "  atom " << a << ": " << format_vec<F>(pis[t].row(a).transpose()) << "\n";
    }
    text << "validated: true\n";
    j["portfolios"] = list;
    j["validated"] = true;
    print(j, text.str(), o.src.json);
    return ok;
}

// ---------------------------------------------------------------- paste

template <typename F>
Vec<F> measure_arg(const Scenario<F>& s, const std::string& text, const char* what)
{
    Json j = json_arg(text, what);
    if (j.is_number_integer()) {
        const long long k = j.get<long long>();
        std::vector<Vec<F>> cands;
        if (s.q.kind == RepKind::quad_ball) cands = s.q.witnesses;
        else if (s.q.vertices) cands = unstack_rows<F>(*s.q.vertices);
        if (k < 0 || k >= static_cast<long long>(cands.size()))
            throw InputError(std::string("--") + what + ": no listed measure #" + std::to_string(k));
        return cands[static_cast<std::size_t>(k)];
    }
    return vec_from_json<F>(j, s.space.atoms());
}

template <typename F>
int paste_cmd(const Scenario<F>& s, const Options& o)
{
    Vec<F> q = measure_arg(s, o.q, "q"), qp = measure_arg(s, o.q_prime, "q-prime");
    Json tj = json_arg(o.tau, "tau");
    StoppingTime tau;
    if (tj.is_number_integer()) tau.assign(static_cast<std::size_t>(s.space.atoms()), tj.get<int>());
    else if (tj.is_array()) {
        for (const auto& v : tj) {
            if (!v.is_number_integer()) throw InputError("--tau: entries must be integers");
            tau.push_back(v.get<int>());
        }
    } else {
        throw InputError("--tau: an integer or an array of integers");
    }
    if (static_cast<Index>(tau.size()) != s.space.atoms()) throw InputError("--tau: one entry per atom");
    if (!is_adapted(s.space, tau)) throw InputError("--tau " + tau_text(tau) + " is not a stopping time");
    Vec<F> pasted = paste(s.space, q, qp, tau);
    const bool admissible = pastable(s.space, s.numeraires, q, qp, tau);
    const bool member = oracle_member(s.q, pasted);
    Json j{{"scenario", s.name},   {"tau", tau},           {"q", vec_to_json<F>(q)},
           {"q_prime", vec_to_json<F>(qp)}, {"pasted", vec_to_json<F>(pasted)}, {"v_admissible", admissible},
           {"member", member}};
    std::ostringstream text;
    text << "scenario: " << s.name << "\ntau: " << tau_text(tau) << "\nq: " << format_vec(q) << "\nq': " << format_vec(qp)
         << "\npasted: " << format_vec(pasted) << "\nv_admissible: " << (admissible ? "true" : "false")
         << "\nmember: " << (member ? "true" : "false") << "\n";
    print(j, text.str(), o.src.json);
    return ok;
}

// ---------------------------------------------------------------- duals

template <typename F>
int duals_cmd(const Scenario<F>& s, const Options& o)
{
    auto rm = s.risk_measure();
    const auto& space = s.space;
    if (o.t < 0 || o.t >= space.horizon()) throw InputError("--t must lie in 0.." + std::to_string(space.horizon() - 1));
    PolyCone<F> a_dual = ensure_generators(dual_cone(acceptance_cone(rm, o.t), space.probs()));
    PolyCone<F> k = ensure_generators(k_cone(rm, s.numeraires, o.t));
    PolyCone<F> m = ensure_generators(predictable_preimage(space, lifted_dual(rm, s.numeraires), s.numeraires.width(), o.t));
    ConeComparison<F> crucial = crucial_claim_check(rm, s.numeraires, o.t);
    Json j{{"scenario", s.name},
           {"t", o.t},
           {"acceptance_dual", rows_json<F>(a_dual.generators())},
           {"k_cone", rows_json<F>(k.generators())},
           {"preimage", rows_json<F>(m.generators())},
           {"crucial_claim", crucial.equal}};
    std::ostringstream text;
    text << "scenario: " << s.name << "\nt: " << o.t << "\n";
    auto list = [&](const char* label, const Mat<F>& g) {
        text << label << " (" << g.rows() << " generators):\n";
        for (Index i = 0; i < g.rows(); ++i) text << "  " << format_vec<F>(g.row(i).transpose()) << "\n";
    };
    list("A_t* densities", a_dual.generators());
    list("K_t portfolios", k.generators());
    list("M_t densities", m.generators());
    text << "crucial_claim: " << (crucial.equal ? "true" : "false") << "\n";
    print(j, text.str(), o.src.json);
    return crucial.equal ? ok : violation;
}

// ---------------------------------------------------------------- corpus

int corpus_list(const Options& o)
{
    auto names = corpus_names();
    if (o.src.json) {
        Json j = names;
        j.push_back("random<seed>");
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& n : names) std::cout << n << "\n";
        std::cout << "random<seed>\n";
    }
    return ok;
}

int corpus_emit(const Options& o)
{
    Source src = o.src;
    src.corpus = o.name;
    AnyScenario s = load(src);
    std::visit([](const auto& sc) { std::cout << scenario_to_json(sc).dump(2) << "\n"; }, s);
    return ok;
}

void add_source(CLI::App* app, Options& o)
{
    auto* c = app->add_option("--corpus", o.src.corpus, "built-in scenario (see `corpus list`)");
    auto* f = app->add_option("--scenario", o.src.scenario, "scenario JSON file");
    c->excludes(f);
    f->excludes(c);
    app->add_option("--numeraire", o.src.numeraire, "numeraire variant of a corpus scenario")
        ->check(CLI::IsMember({"unit", "paper"}));
    app->add_option_function<std::uint64_t>(
        "--seed", [&o](std::uint64_t s) { o.src.seed = s; o.src.seeded = true; }, "seed for --corpus random");
    app->add_option_function<std::size_t>("--cap", [&o](std::size_t c) { o.cap = c; }, "stopping-time enumeration cap");
    auto* js = app->add_flag("--json", o.src.json, "JSON output");
    bool text = false;
    app->add_flag("--text", text, "text output (default)")->excludes(js);
}

}   // namespace

int main(int argc, char** argv)
{
    CLI::App app{"conerisk: exact checks for time-consistent risk measures on finite filtrations"};
    app.require_subcommand(1);
    Options o;

    auto* check_cmd = app.add_subcommand("check", "time consistency, representability and dual stability");
    add_source(check_cmd, o);
    check_cmd->add_option("--expect", o.expect, "comma list of expected verdicts");

    auto* eval_cmd = app.add_subcommand("eval", "rho_t(X) and epsilon_t(X)");
    add_source(eval_cmd, o);
    eval_cmd->add_option("--t", o.t, "time")->required();
    eval_cmd->add_option("--claim", o.claim, "claim: JSON array or file")->required();

    auto* dec_cmd = app.add_subcommand("decompose", "split a claim into one-period acceptable portfolios");
    add_source(dec_cmd, o);
    dec_cmd->add_option("--claim", o.claim, "claim: JSON array or file")->required();

    auto* paste_sub = app.add_subcommand("paste", "paste two measures at a stopping time");
    add_source(paste_sub, o);
    paste_sub->add_option("--q", o.q, "measure: JSON array or index into the listed measures")->required();
    paste_sub->add_option("--q-prime", o.q_prime, "measure: JSON array or index")->required();
    paste_sub->add_option("--tau", o.tau, "stopping time: integer or JSON array")->required();

    auto* duals_sub = app.add_subcommand("duals", "dual cones at time t and the crucial-claim identity");
    add_source(duals_sub, o);
    duals_sub->add_option("--t", o.t, "time")->required();

    auto* corpus_cmd = app.add_subcommand("corpus", "built-in scenarios");
    corpus_cmd->require_subcommand(1);
    auto* list_cmd = corpus_cmd->add_subcommand("list", "scenario names");
    list_cmd->add_flag("--json", o.src.json, "JSON output");
    auto* emit_cmd = corpus_cmd->add_subcommand("emit", "print a scenario as JSON");
    emit_cmd->add_option("name", o.name, "scenario name")->required();
    emit_cmd->add_option("--numeraire", o.src.numeraire, "numeraire variant")->check(CLI::IsMember({"unit", "paper"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (list_cmd->parsed()) return corpus_list(o);
        if (emit_cmd->parsed()) return corpus_emit(o);
        if (o.src.corpus.empty() && o.src.scenario.empty()) throw InputError("give --corpus or --scenario");
        AnyScenario s = load(o.src);
        return std::visit(
            [&](const auto& sc) -> int {
                if (check_cmd->parsed()) return check(sc, o);
                if (eval_cmd->parsed()) return eval(sc, o);
                if (dec_cmd->parsed()) return decompose_cmd(sc, o);
                if (paste_sub->parsed()) return paste_cmd(sc, o);
                return duals_cmd(sc, o);
            },
            s);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const PasteError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const TheoremViolation& e) {
        std::cerr << "theorem violation: " << e.what() << "\n";
        return violation;
    } catch (const Refusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return mismatch;
    } catch (const ScaleLimit& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return mismatch;
    } catch (const Unsupported& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return mismatch;
    } catch (const CapExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return mismatch;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    }
}
