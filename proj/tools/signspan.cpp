#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "signspan/bounds.hpp"
#include "signspan/estimators.hpp"
#include "signspan/eta_star.hpp"
#include "signspan/span_events.hpp"
#include "signspan/verify.hpp"
#include "signspan/version.hpp"

namespace {

using namespace signspan;

unsigned resolve_workers(unsigned flag_value, bool flag_given) {
    if (flag_given) return flag_value == 0 ? 1 : flag_value;
    if (const char* env = std::getenv("SIGNSPAN_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 4096) return static_cast<unsigned>(v);
    }
    return 1;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// One-line run record put at the top of every report so outputs are
// self-describing and reproducible.
std::string config_comment(const std::string& sub,
                           const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream out;
    out << "# " << kVersion << " | " << sub;
    for (const auto& [k, v] : kv) out << ' ' << k << '=' << v;
    return out.str();
}

nlohmann::ordered_json config_json(const std::string& sub,
                                   const std::vector<std::pair<std::string, std::string>>& kv) {
    nlohmann::ordered_json j;
    j["subcommand"] = sub;
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

EventSpec parse_event(const std::string& name, int p, int n, int m) {
    const auto kind = EventSpec::kind_from_name(name);
    if (!kind)
        throw std::invalid_argument(
            "unknown event '" + name +
            "' (use kso | support | support-indep | rank-deficient | singular | singular01)");
    EventSpec e;
    e.kind = *kind;
    e.n = n;
    e.p = (e.kind == EventKind::kSingularPm1 || e.kind == EventKind::kSingular01) ? n : p;
    e.m = m;
    e.validate();
    return e;
}

struct EstimateArgs {
    std::string event = "kso";
    int p = 0, n = 0, m = 0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double confidence = 0.95;
    unsigned workers = 1;
    bool workers_given = false;
    int sweep_max = 0;
    std::string format = "csv";
    std::string output;
};

int cmd_estimate(const EstimateArgs& a) {
    if (!a.seed_given)
        throw std::invalid_argument("estimate: --seed is required (no silent nondeterminism)");
    const unsigned workers = resolve_workers(a.workers, a.workers_given);

    if (a.sweep_max > 0) {
        const auto rows = singularity_sweep(a.sweep_max, a.trials, a.seed, workers);
        std::ostringstream out;
        out << config_comment("estimate", {{"sweep_max", std::to_string(a.sweep_max)},
                                           {"trials", std::to_string(a.trials)},
                                           {"seed", std::to_string(a.seed)},
                                           {"workers", std::to_string(workers)}})
            << '\n'
            << estimate_csv_header() << ",asymptote,ratio\n";
        for (const auto& r : rows) {
            const double ratio = r.asymptote > 0 ? r.estimate.p_hat / r.asymptote : 0.0;
            out << estimate_csv_row(r.estimate) << ',' << fmt_double(r.asymptote) << ','
                << fmt_double(ratio) << '\n';
        }
        write_output(a.output, out.str());
        return 0;
    }

    const EventSpec e = parse_event(a.event, a.p, a.n, a.m);
    const Estimate est = mc_estimate(e, a.trials, a.seed, a.confidence, workers);
    const std::vector<std::pair<std::string, std::string>> kv = {
        {"event", e.name()},
        {"p", std::to_string(e.p)},
        {"n", std::to_string(e.n)},
        {"m", std::to_string(e.m)},
        {"trials", std::to_string(a.trials)},
        {"seed", std::to_string(a.seed)},
        {"confidence", fmt_double(a.confidence)},
        {"workers", std::to_string(workers)},
    };

    std::ostringstream out;
    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["version"] = kVersion;
        j["config"] = config_json("estimate", kv);
        nlohmann::ordered_json je;
        je["event"] = e.name();
        je["p"] = e.p;
        je["n"] = e.n;
        je["m"] = e.m;
        je["trials"] = est.trials;
        je["hits"] = est.hits;
        je["p_hat"] = est.p_hat;
        je["ci_low"] = est.ci_low;
        je["ci_high"] = est.ci_high;
        je["confidence"] = est.confidence;
        je["seed"] = est.seed;
        je["workers"] = est.workers;
        if (est.hits == 0) {
            je["below_resolution"] = true;
            je["one_sided_upper"] = rare_event_upper_bound(est.trials, est.confidence);
        }
        j["estimate"] = je;
        out << j.dump() << '\n';
    } else {
        out << config_comment("estimate", kv) << '\n'
            << estimate_csv_header() << '\n'
            << estimate_csv_row(est) << '\n';
        if (est.hits == 0)
            out << "# below resolution: 0 hits; one-sided " << fmt_double(est.confidence)
                << " upper bound "
                << fmt_double(rare_event_upper_bound(est.trials, est.confidence)) << '\n';
    }
    write_output(a.output, out.str());
    return 0;
}

struct ExactArgs {
    std::string event;
    std::string count;
    bool delta = false;
    std::string matrix_file;
    int p = 0, n = 0, m = 0, k = 0;
    bool no_symmetry = false;
    bool force = false;
    unsigned workers = 1;
    bool workers_given = false;
    std::string output;
};

int cmd_exact(const ExactArgs& a) {
    const unsigned workers = resolve_workers(a.workers, a.workers_given);
    nlohmann::ordered_json j;
    j["version"] = kVersion;

    if (!a.matrix_file.empty()) {
        std::ifstream in(a.matrix_file);
        if (!in) throw std::invalid_argument("cannot open matrix file: " + a.matrix_file);
        const SignMatrix mat = parse_sign_matrix(in);
        j["config"] = config_json("exact", {{"matrix", a.matrix_file}});
        j["p"] = mat.p;
        j["n"] = mat.n;
        std::vector<std::uint64_t> words;
        for (const auto& row : mat.rows) words.push_back(row.bits());
        const int r = detail::exact_rank_sign_words(words.data(), mat.p, mat.n);
        j["rank"] = r;
        const auto witness = kso_check(mat);
        j["kso"] = witness.has_value();
        if (witness) {
            std::string wtext;
            for (int c = 0; c < mat.n; ++c)
                wtext.push_back(witness->witness.coord(c) > 0 ? '+' : '-');
            j["witness"] = wtext;
            std::vector<std::string> coeffs;
            for (const auto& c : witness->coefficients) coeffs.push_back(to_fraction_string(c));
            j["coefficients"] = coeffs;
            j["support"] = witness->support;
        }
        if (r == mat.p) {
            nlohmann::ordered_json cj;
            for (const auto& [support, classes] : witness_support_census(mat))
                cj[std::to_string(support)] = classes;
            j["census"] = cj;
        }
        write_output(a.output, j.dump() + "\n");
        return 0;
    }

    if (a.delta) {
        if (a.n < 1 || a.k < 1) throw std::invalid_argument("exact --delta needs -n and -k");
        j["config"] = config_json("exact", {{"delta", "1"},
                                            {"n", std::to_string(a.n)},
                                            {"k", std::to_string(a.k)},
                                            {"force", a.force ? "1" : "0"}});
        j["quantity"] = "delta";
        j["n"] = a.n;
        j["k"] = a.k;
        j["value"] = to_fraction_string(delta_dependent_fraction(a.n, a.k, a.force));
        write_output(a.output, j.dump() + "\n");
        return 0;
    }

    if (!a.count.empty()) {
        if (a.count != "kso-tuples")
            throw std::invalid_argument("exact --count supports only 'kso-tuples'");
        if (a.n < 1) throw std::invalid_argument("exact --count needs -n");
        j["config"] = config_json("exact", {{"count", a.count},
                                            {"n", std::to_string(a.n)},
                                            {"force", a.force ? "1" : "0"},
                                            {"workers", std::to_string(workers)}});
        const BigInt c = count_kso_independent_tuples(a.n, a.force, workers);
        j["quantity"] = "kso-tuples";
        j["n"] = a.n;
        j["count"] = c.str();
        const Rational fraction(c, pow2(static_cast<unsigned>(a.n) * a.n));
        j["fraction"] = to_fraction_string(fraction);
        const Rational reference(BigInt(a.n) * a.n, pow2(static_cast<unsigned>(a.n - 1)));
        j["fraction_over_reference"] = (fraction / reference).convert_to<double>();
        write_output(a.output, j.dump() + "\n");
        return 0;
    }

    if (a.event.empty())
        throw std::invalid_argument("exact: need --event, --count, --delta or --matrix");
    if (a.n < 1) throw std::invalid_argument("exact: -n is required");
    const EventSpec e = parse_event(a.event, a.p, a.n, a.m);
    ExactOptions opts;
    opts.symmetry = !a.no_symmetry;
    opts.force = a.force;
    opts.workers = workers;
    const ExactCount r = exact_event_probability(e, opts);
    nlohmann::ordered_json body = nlohmann::ordered_json::parse(exact_result_json(e, r));
    body["version"] = kVersion;
    body["config"] = config_json("exact", {{"event", e.name()},
                                           {"p", std::to_string(e.p)},
                                           {"n", std::to_string(e.n)},
                                           {"m", std::to_string(e.m)},
                                           {"symmetry", opts.symmetry ? "1" : "0"},
                                           {"force", opts.force ? "1" : "0"},
                                           {"workers", std::to_string(workers)}});
    write_output(a.output, body.dump() + "\n");
    return 0;
}

struct EtaArgs {
    std::string config_file;
    int weight_sets = 0;
    std::uint64_t seed = 1;
    std::string field = "q";
    bool mutate = false;
    std::string format = "text";
    std::string output;
};

int cmd_eta(const EtaArgs& a) {
    std::ifstream in(a.config_file);
    if (!in) throw std::invalid_argument("cannot open config file: " + a.config_file);
    std::stringstream buf;
    buf << in.rdbuf();
    const PointConfig h = PointConfig::from_json_text(buf.str());

    const bool over_q = a.field == "q" || a.field == "Q";
    HomologyField field = HomologyField::rationals();
    if (!over_q) {
        if (a.field.rfind("gf", 0) == 0)
            field = HomologyField::gf(std::stoull(a.field.substr(2)));
        else
            throw std::invalid_argument("eta: --field must be q or gf<prime>");
    }

    std::vector<std::vector<Rational>> weight_sets{h.weights};
    CounterRng rng = CounterRng::stream(a.seed, 7);
    for (int s = 1; s < a.weight_sets; ++s) {
        std::vector<Rational> w(h.size());
        Rational sum(0);
        for (int i = 0; i + 1 < h.size(); ++i) {
            const long long num = static_cast<long long>(rng.next_below(9)) - 4;
            const long long den = 1 + static_cast<long long>(rng.next_below(4));
            w[i] = Rational(num, den);
            sum += w[i];
        }
        w[h.size() - 1] = Rational(1) - sum;
        weight_sets.push_back(std::move(w));
    }

    FlagSumOptions fopts;
    fopts.negate_top_weight_mutation = a.mutate;
    const EtaCrossCheck cc = cross_check_eta_star(h, weight_sets, fopts);
    const long long hom_field = over_q ? cc.homology : eta_star_homology(h, field);

    std::ostringstream out;
    if (a.format == "json") {
        nlohmann::ordered_json j;
        j["version"] = kVersion;
        j["config"] = config_json("eta", {{"file", a.config_file},
                                          {"weight_sets", std::to_string(weight_sets.size())},
                                          {"seed", std::to_string(a.seed)},
                                          {"field", a.field}});
        j["homology"] = cc.homology;
        if (!over_q) j["homology_over_field"] = hom_field;
        std::vector<std::string> sums;
        for (const auto& s : cc.flag_sums) sums.push_back(to_fraction_string(s));
        j["flag_sums"] = sums;
        j["pass"] = cc.pass;
        out << j.dump() << '\n';
    } else {
        out << config_comment("eta", {{"file", a.config_file},
                                      {"weight_sets", std::to_string(weight_sets.size())},
                                      {"seed", std::to_string(a.seed)},
                                      {"field", a.field}})
            << '\n';
        out << "homology rank: " << cc.homology << '\n';
        if (!over_q) out << "homology rank over " << a.field << ": " << hom_field << '\n';
        for (std::size_t i = 0; i < cc.flag_sums.size(); ++i)
            out << "flag sum [" << i << "]: " << to_fraction_string(cc.flag_sums[i]) << '\n';
        out << (cc.pass ? "PASS" : "FAIL") << '\n';
    }
    write_output(a.output, out.str());
    return cc.pass ? 0 : 2;
}

struct BoundsArgs {
    std::string range = "2..10";
    std::string epsilon = "1/128";
    std::string c = "184/25";
    std::string output;
};

int cmd_bounds(const BoundsArgs& a) {
    long lo = 0, hi = 0;
    const auto dots = a.range.find("..");
    if (dots == std::string::npos) {
        lo = hi = std::stol(a.range);
    } else {
        lo = std::stol(a.range.substr(0, dots));
        hi = std::stol(a.range.substr(dots + 2));
    }
    if (lo < 2 || hi < lo) throw std::invalid_argument("bounds: bad --n range (want e.g. 2..10)");
    const Rational eps = rational_from_string(a.epsilon);
    const Rational c = rational_from_string(a.c);

    std::ostringstream out;
    out << config_comment("bounds", {{"n", a.range}, {"epsilon", a.epsilon}, {"c", a.c}}) << '\n'
        << bound_csv_header() << '\n';
    for (long n = lo; n <= hi; ++n)
        for (const auto& row : bound_table(n, eps, c)) out << bound_csv_row(row) << '\n';
    write_output(a.output, out.str());
    return 0;
}

struct VerifyArgs {
    std::string only;
    int samples = 100;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool workers_given = false;
    bool mutate = false;
};

int cmd_verify(const VerifyArgs& a) {
    BatteryOptions opts;
    opts.only = a.only;
    opts.samples = a.samples;
    opts.seed = a.seed;
    opts.workers = resolve_workers(a.workers, a.workers_given);
    opts.inject_flag_sign_error = a.mutate;
    const auto results = run_battery(opts);
    if (results.empty()) {
        std::cerr << "error: no check matches --only '" << a.only << "'\n";
        return 1;
    }
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        all = all && r.pass;
    }
    std::cout << (all ? "all checks passed" : "some checks FAILED") << '\n';
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - span events of random sign vectors: exact counts, Monte Carlo, "
                 "eta-star cross-checks, bound tables"};
    app.require_subcommand(1);

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "Seeded Monte Carlo estimate of an event probability");
    est->add_option("--event", ea.event,
                    "kso | support | support-indep | rank-deficient | singular | singular01");
    est->add_option("-p,--p", ea.p, "number of vectors");
    auto* est_n = est->add_option("-n,--n", ea.n, "vector length");
    est->add_option("-m,--m", ea.m, "support size (support events)");
    est->add_option("--trials", ea.trials, "Monte Carlo trials");
    est->add_option("--seed", ea.seed, "RNG seed (required)");
    est->add_option("--confidence", ea.confidence, "interval confidence, default 0.95");
    est->add_option("--workers", ea.workers, "worker threads (flag wins over SIGNSPAN_WORKERS)");
    est->add_option("--sweep-max", ea.sweep_max, "emit singularity rows for n=2..N instead");
    est->add_option("--format", ea.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    est->add_option("-o,--output", ea.output, "output path (default stdout)");

    ExactArgs xa;
    auto* exa = app.add_subcommand("exact", "Exhaustive exact probabilities, counts and matrix reports");
    exa->add_option("--event", xa.event, "event to count exactly");
    exa->add_option("--count", xa.count, "named quantity: kso-tuples");
    exa->add_flag("--delta", xa.delta, "dependent-tuple fraction (needs -n, -k)");
    exa->add_option("--matrix", xa.matrix_file, "'+'/'-' matrix file to analyze");
    exa->add_option("-p,--p", xa.p, "number of vectors");
    exa->add_option("-n,--n", xa.n, "vector length");
    exa->add_option("-m,--m", xa.m, "support size");
    exa->add_option("-k,--k", xa.k, "tuple length for --delta");
    exa->add_flag("--no-symmetry", xa.no_symmetry, "disable the pinned-first-row reduction");
    exa->add_flag("--force", xa.force, "override size guards");
    exa->add_option("--workers", xa.workers, "worker threads");
    exa->add_option("-o,--output", xa.output, "output path (default stdout)");

    EtaArgs ta;
    auto* eta = app.add_subcommand("eta", "Cross-check the point-configuration invariant two ways");
    eta->add_option("--config", ta.config_file, "point configuration JSON")->required();
    eta->add_option("--weight-sets", ta.weight_sets,
                    "total weight sets to test (extra ones drawn from --seed)");
    eta->add_option("--seed", ta.seed, "seed for extra weight sets");
    eta->add_option("--field", ta.field, "homology field: q (default) or gf<prime>, e.g. gf2");
    eta->add_option("--format", ta.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    eta->add_flag("--mutate-flag-sign", ta.mutate, "test hook: corrupt the flag evaluation")
        ->group("");
    eta->add_option("-o,--output", ta.output, "output path (default stdout)");

    BoundsArgs ba;
    auto* bnd = app.add_subcommand("bounds", "Closed-form bound and asymptote table (CSV)");
    bnd->add_option("--n", ba.range, "n or n range, e.g. 2..10");
    bnd->add_option("--epsilon", ba.epsilon, "case-partition epsilon (rational, default 1/128)");
    bnd->add_option("--c", ba.c, "case-partition constant (rational, default 184/25)");
    bnd->add_option("-o,--output", ba.output, "output path (default stdout)");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Run the desk-scale verification battery");
    ver->add_option("--only", va.only, "substring filter on check names");
    ver->add_option("--samples", va.samples, "random configurations for the identity check");
    ver->add_option("--seed", va.seed, "battery seed");
    ver->add_option("--workers", va.workers, "worker threads");
    ver->add_flag("--mutate-flag-sign", va.mutate, "test hook: corrupt the flag evaluation")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (est->parsed()) {
            if (est_n->count() == 0 && ea.sweep_max == 0)
                throw std::invalid_argument("estimate: -n is required");
            ea.seed_given = est->count("--seed") > 0;
            ea.workers_given = est->count("--workers") > 0;
            return cmd_estimate(ea);
        }
        if (exa->parsed()) {
            xa.workers_given = exa->count("--workers") > 0;
            return cmd_exact(xa);
        }
        if (eta->parsed()) return cmd_eta(ta);
        if (bnd->parsed()) return cmd_bounds(ba);
        if (ver->parsed()) {
            va.workers_given = ver->count("--workers") > 0;
            return cmd_verify(va);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
