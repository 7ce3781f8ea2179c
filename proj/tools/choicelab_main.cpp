/// Command line front end: audit rules, run the impossibility search, emit
/// decisiveness traces, and build risk profiles from synthetic data. Every
/// run embeds its full configuration in the JSON it writes, so a report is
/// reproducible from its own content plus the binary.
///
/// Exit codes: 0 success, 1 validation error, 2 guard violation,
/// 3 assertion failure. Verdicts inside reports never drive exit codes
/// unless an --assert-* flag asks for it.
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "choicelab/json_io.hpp"
#include "choicelab/risk.hpp"
#include "choicelab/verify.hpp"
#include "choicelab/zoo.hpp"

namespace {

using choicelab::json;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(json doc, const json& config, bool no_timestamp, const std::string& out) {
    doc["config"] = config;
    if (!no_timestamp) doc["generated_at"] = utc_timestamp();
    const std::string kind = doc.value("kind", "");
    if (kind == "axiom_report" || kind == "survivor_report" || kind == "decisiveness_trace")
        choicelab::io::validate_report(doc);
    const std::string text = doc.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw choicelab::ValidationError("cannot open output file '" + out + "'");
    f << text;
    if (!f) throw choicelab::ValidationError("failed writing output file '" + out + "'");
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw choicelab::ValidationError(std::string(what) + ": cannot read file '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw choicelab::ValidationError(std::string(what) + ": '" + path +
                                         "' is not valid JSON (" + e.what() + ")");
    }
    return j;
}

struct AuditArgs {
    std::string rule;
    std::optional<int> env_index;
    std::vector<double> weights;
    int envs = 2;
    int universe = 3;
    std::uint64_t seed = 42;
    int samples = 100;
    int transforms = 100;
    bool include_ties = false;
    std::size_t max_menu_size = 0;
    std::string profile_file;
    std::string out;
};

int run_audit(const AuditArgs& a, bool no_timestamp) {
    json params = json::object();
    if (a.env_index) params["env_index"] = *a.env_index;
    if (!a.weights.empty()) params["weights"] = a.weights;
    const choicelab::AggregationRule rule = choicelab::zoo::make_rule(a.rule, params);

    choicelab::zoo::AuditOptions opt;
    opt.alternatives = static_cast<std::size_t>(a.universe);
    opt.environments = a.envs;
    opt.samples = a.samples;
    opt.transforms = a.transforms;
    opt.seed = a.seed;
    opt.include_ties = a.include_ties;
    opt.max_menu_size = a.max_menu_size;
    if (!a.profile_file.empty()) {
        auto [profile, universe] =
            choicelab::io::profile_document_parse(read_json_file(a.profile_file, "audit"));
        opt.profile = profile;
        opt.alternatives = universe.size();
        opt.environments = profile.environments();
    }

    const choicelab::zoo::AuditReport report = choicelab::zoo::audit(rule, opt);

    json config{{"command", "audit"},
                {"rule", a.rule},
                {"params", params},
                {"universe", opt.alternatives},
                {"envs", opt.environments},
                {"seed", a.seed},
                {"samples", a.samples},
                {"transforms", a.transforms},
                {"include_ties", a.include_ties},
                {"max_menu_size", a.max_menu_size},
                {"profile_file", a.profile_file},
                {"out", a.out}};
    emit(choicelab::zoo::to_json(report), config, no_timestamp, a.out);
    return 0;
}

struct VerifyArgs {
    int alternatives = 3;
    int environments = 3;
    std::vector<std::string> axioms = {"ic", "po", "iih", "ir"};
    bool assert_theorem = false;
    bool no_prune = false;
    bool omit_triples = false;
    bool allow_no_po = false;
    int crosscheck_samples = 3;
    int max_listed = 64;
    std::uint64_t seed = 42;
    std::string out;
};

int run_verify(const VerifyArgs& a, bool no_timestamp) {
    choicelab::verify::SearchOptions opt;
    opt.alternatives = a.alternatives;
    opt.environments = a.environments;
    opt.axioms = choicelab::verify::AxiomSet{false, false, false, false, false};
    for (const std::string& tok : a.axioms) {
        if (tok == "ic")
            opt.axioms.internal_consistency = true;
        else if (tok == "po")
            opt.axioms.pareto = true;
        else if (tok == "iih")
            opt.axioms.iih = true;
        else if (tok == "ir")
            opt.axioms.ir = true;
        else if (tok == "ci")
            opt.axioms.ci = true;
        else
            throw choicelab::ValidationError("unknown axiom token '" + tok +
                                             "'; use ic, po, iih, ir, ci");
    }
    opt.prune = !a.no_prune;
    opt.omit_triples = a.omit_triples;
    opt.allow_missing_pareto = a.allow_no_po;
    opt.crosscheck_samples = a.crosscheck_samples;
    opt.max_listed = a.max_listed;
    opt.seed = a.seed;

    const choicelab::verify::SurvivorReport report = choicelab::verify::search_survivors(opt);

    json config{{"command", "verify"},
                {"alternatives", a.alternatives},
                {"environments", a.environments},
                {"axioms", a.axioms},
                {"assert_theorem", a.assert_theorem},
                {"prune", opt.prune},
                {"omit_triples", a.omit_triples},
                {"allow_no_po", a.allow_no_po},
                {"crosscheck_samples", a.crosscheck_samples},
                {"max_listed", a.max_listed},
                {"seed", a.seed},
                {"out", a.out}};
    emit(choicelab::verify::to_json(report, !no_timestamp), config, no_timestamp, a.out);

    if (a.assert_theorem) {
        if (opt.axioms.ci) {
            if (a.environments >= 3 && report.survivor_count > 0)
                throw choicelab::AssertionError(
                    "assert-theorem: " + std::to_string(report.survivor_count) +
                    " rules satisfy every requirement at " +
                    std::to_string(a.environments) + " environments");
        } else if (!report.all_dictatorial) {
            throw choicelab::AssertionError(
                "assert-theorem: a survivor without the non-dictatorship filter is not "
                "dictatorial");
        }
    }
    return 0;
}

struct TraceArgs {
    int environments = 3;
    int anchor = 1;
    std::string out;
};

int run_trace(const TraceArgs& a, bool no_timestamp) {
    const choicelab::verify::DecisivenessTrace trace =
        choicelab::verify::trace_decisiveness(a.environments, a.anchor);
    json config{{"command", "trace"},
                {"environments", a.environments},
                {"anchor", a.anchor},
                {"out", a.out}};
    emit(choicelab::verify::to_json(trace, !no_timestamp), config, no_timestamp, a.out);
    return 0;
}

struct ProfileArgs {
    std::string spec;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int run_profile(const ProfileArgs& a, bool no_timestamp) {
    const choicelab::risk::GeneratorSpec spec =
        choicelab::risk::generator_spec_from_json(read_json_file(a.spec, "profile"));
    if (spec.hypotheses.empty())
        throw choicelab::ValidationError(
            "profile: the generator spec lists no hypotheses to evaluate");
    const std::uint64_t seed = a.seed ? *a.seed : spec.seed.value_or(42);

    const auto datasets = choicelab::risk::synth_generate(spec, seed);
    std::vector<std::string> labels;
    for (const auto& h : spec.hypotheses) labels.push_back(h.id);
    const choicelab::Universe u = choicelab::make_universe(labels);
    const choicelab::RiskProfile profile = choicelab::risk::build_profile_multisource(
        spec.hypotheses, datasets, spec.loss, spec.regularizer);

    json config{{"command", "profile"}, {"spec", a.spec}, {"seed", seed}, {"out", a.out}};
    emit(choicelab::io::profile_document(profile, u), config, no_timestamp, a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"choice-correspondence laboratory: axiom audits, impossibility search, "
                 "decisiveness traces, synthetic risk profiles"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    bool no_timestamp = false;
    app.add_flag("--no-timestamp", no_timestamp,
                 "omit the generation timestamp for byte-stable output");

    AuditArgs audit;
    CLI::App* cmd_audit = app.add_subcommand("audit", "run every axiom check against one rule");
    cmd_audit->add_option("--rule", audit.rule, "rule name")->required();
    cmd_audit->add_option("--env-index", audit.env_index, "dictator environment for erm_single");
    cmd_audit->add_option("--weights", audit.weights, "weights for weighted_sum")->delimiter(',');
    cmd_audit->add_option("--envs", audit.envs, "environment count");
    cmd_audit->add_option("--universe", audit.universe, "hypothesis count");
    cmd_audit->add_option("--seed", audit.seed, "sampling seed");
    cmd_audit->add_option("--samples", audit.samples, "profiles per sampled check");
    cmd_audit->add_option("--transforms", audit.transforms, "rescalings for the invariance check");
    cmd_audit->add_flag("--include-ties", audit.include_ties,
                        "also check ordinal independence on profiles with ties");
    cmd_audit->add_option("--max-menu-size", audit.max_menu_size, "menu size cap (0 = all)");
    cmd_audit->add_option("--profile-file", audit.profile_file,
                          "audit this fixed profile instead of sampling");
    cmd_audit->add_option("--out", audit.out, "output file (default stdout)");

    VerifyArgs verify;
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "exhaustive search for rules meeting the requirements");
    cmd_verify->add_option("--alternatives", verify.alternatives, "hypothesis count (fixed at 3)");
    cmd_verify->add_option("--environments", verify.environments, "environment count (1..3)");
    cmd_verify->add_option("--axioms", verify.axioms, "comma list from ic,po,iih,ir,ci")
        ->delimiter(',');
    cmd_verify->add_flag("--assert-theorem", verify.assert_theorem,
                         "exit 3 when the searched claim fails");
    cmd_verify->add_flag("--no-prune", verify.no_prune, "brute-force walk (2 environments max)");
    cmd_verify->add_flag("--omit-triples", verify.omit_triples,
                         "experiment: drop triple menus from the consistency domain");
    cmd_verify->add_flag("--allow-no-po", verify.allow_no_po,
                         "permit searching without the unanimity pin");
    cmd_verify->add_option("--crosscheck-samples", verify.crosscheck_samples,
                           "survivors re-checked through the generic machinery");
    cmd_verify->add_option("--max-listed", verify.max_listed, "survivors listed in the report");
    cmd_verify->add_option("--seed", verify.seed, "cross-check sampling seed");
    cmd_verify->add_option("--out", verify.out, "output file (default stdout)");

    TraceArgs trace;
    CLI::App* cmd_trace =
        app.add_subcommand("trace", "contraction trace from the full coalition to its dictator");
    cmd_trace->add_option("--environments", trace.environments, "environment count (1..16)");
    cmd_trace->add_option("--anchor", trace.anchor,
                          "environment whose single-environment minimizer is traced");
    cmd_trace->add_option("--out", trace.out, "output file (default stdout)");

    ProfileArgs profile;
    CLI::App* cmd_profile =
        app.add_subcommand("profile", "generate synthetic data and build a risk profile");
    cmd_profile->add_option("--spec", profile.spec, "generator spec JSON file")->required();
    std::uint64_t profile_seed = 0;
    CLI::Option* seed_opt =
        cmd_profile->add_option("--seed", profile_seed, "generation seed (overrides the file's seed)");
    cmd_profile->add_option("--out", profile.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // flag mistakes are validation errors
    }

    try {
        if (cmd_audit->parsed()) return run_audit(audit, no_timestamp);
        if (cmd_verify->parsed()) return run_verify(verify, no_timestamp);
        if (cmd_trace->parsed()) return run_trace(trace, no_timestamp);
        if (cmd_profile->parsed()) {
            if (seed_opt->count() > 0) profile.seed = profile_seed;
            return run_profile(profile, no_timestamp);
        }
    } catch (const choicelab::AssertionError& e) {
        std::cerr << "assertion failure: " << e.what() << "\n";
        return 3;
    } catch (const choicelab::GuardError& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return 2;
    } catch (const choicelab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
