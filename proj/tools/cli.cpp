#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tetraverify/report.hpp"
#include "tetraverify/sampling.hpp"
#include "tetraverify/selftest.hpp"
#include "tetraverify/smatrix.hpp"
#include "tetraverify/tetra.hpp"

namespace tetraverify::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::array<Triple, 4> kAllTriples{{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}};

// ---------------------------------------------------------------------------
// Configuration

json config_echo(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["mode"] = to_string(c.mode);
    j["k"] = c.k_grid;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["bound"] = c.bound;
    j["lambdas"] = c.lambdas;
    j["tol"] = c.tol;
    if (c.command == "solve-s") {
        j["triple"] = c.triple;
        j["source"] = c.source;
    }
    return j;
}

ScalarMode parse_mode(const std::string& text) {
    if (text == "exact") return ScalarMode::Exact;
    if (text == "approx") return ScalarMode::Approx;
    throw UsageError("--mode must be exact or approx, got '" + text + "'");
}

// Config-file values fill only what the command line left unset.
void apply_config_file(RunConfig& c, const std::map<std::string, bool>& given, std::string& mode_text) {
    std::ifstream in(c.config_file);
    if (!in) throw UsageError("cannot open config file '" + c.config_file + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config file '" + c.config_file + "' is not valid JSON: " + e.what());
    }
    const auto unset = [&](const char* key) { return j.contains(key) && !given.at(key); };
    try {
        if (unset("mode")) mode_text = j["mode"].get<std::string>();
        if (unset("k")) {
            c.k_grid = j["k"].is_array() ? j["k"].get<std::vector<double>>() : std::vector<double>{j["k"].get<double>()};
        }
        if (unset("lambdas")) {
            c.lambdas.clear();
            for (const json& v : j["lambdas"]) c.lambdas.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
        if (unset("trials")) c.trials = j["trials"].get<std::size_t>();
        if (unset("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (unset("bound")) c.bound = j["bound"].get<int>();
        if (unset("tol")) c.tol = j["tol"].get<double>();
    } catch (const json::exception& e) {
        throw UsageError("config file '" + c.config_file + "': " + e.what());
    }
}

void validate(const RunConfig& c) {
    if (c.mode == ScalarMode::Exact) {
        for (double k : c.k_grid) {
            if (k != 0.0) throw UsageError("exact mode requires k = 0 (got " + format_double(k) + ")");
        }
    } else {
        for (const std::string& l : c.lambdas) {
            if (l.find('/') != std::string::npos) {
                throw UsageError("approx mode takes real lambdas, not rational angle '" + l + "'");
            }
        }
    }
    for (double k : c.k_grid) {
        if (!(k >= 0.0 && k < 1.0)) throw UsageError("k = " + format_double(k) + " outside [0, 1)");
    }
    if (c.trials == 0) throw UsageError("--trials must be at least 1");
    if (c.bound < 1) throw UsageError("--bound must be at least 1");
    if (!(c.tol > 0.0 && c.tol < 1.0)) throw UsageError("--tol must be in (0, 1)");
    if (c.command != "survey" && c.k_grid.size() > 1) {
        throw UsageError(c.command + " takes a single --k value");
    }
    if (c.command == "survey") {
        if (c.mode != ScalarMode::Approx) throw UsageError("survey runs in approx mode only");
        if (c.k_grid.empty()) throw UsageError("survey needs a nonempty --k grid");
    }
    if (c.command == "verify-algebra" && !c.lambdas.empty() && c.lambdas.size() != 3 && c.lambdas.size() != 4) {
        throw UsageError("verify-algebra takes 3 or 4 --lambdas");
    }
    if (c.command == "verify-tetrahedron" && !c.lambdas.empty() && c.lambdas.size() != 4) {
        throw UsageError("verify-tetrahedron takes 4 --lambdas");
    }
    if (c.command == "solve-s") {
        if (c.triple.size() != 3) throw UsageError("--triple takes three line labels");
        if (c.source != "closed" && c.source != "solved") throw UsageError("--source must be closed or solved");
        if (c.source == "closed" && c.k() != 0.0) throw UsageError("closed-form S exists only at k = 0");
    }
}

ExactConfig exact_override(const RunConfig& c) {
    std::vector<RationalAngle> angles;
    try {
        for (const std::string& l : c.lambdas) angles.push_back({Rational::parse(l)});
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (const auto why = exact_degeneracy(angles)) throw UsageError("degenerate --lambdas: " + *why);
    return ExactConfig(std::move(angles));
}

ApproxConfig approx_override(const RunConfig& c) {
    std::vector<double> lambdas;
    for (const std::string& l : c.lambdas) {
        try {
            std::size_t used = 0;
            lambdas.push_back(std::stod(l, &used));
            if (used != l.size()) throw std::invalid_argument(l);
        } catch (const std::exception&) {
            throw UsageError("--lambdas entry '" + l + "' is not a real number");
        }
    }
    ApproxConfig config(c.k(), std::move(lambdas));
    if (const auto why = approx_degeneracy(config, SamplerBounds{}.pole_margin)) {
        throw UsageError("degenerate --lambdas: " + *why);
    }
    return config;
}

SamplerBounds bounds_of(const RunConfig& c) {
    SamplerBounds b;
    b.bound = c.bound;
    return b;
}

json draw_json(const ExactConfig& config) {
    json out = json::array();
    for (const RationalAngle& a : config.angles()) out.push_back(a.t.to_string());
    return out;
}

json draw_json(const ApproxConfig& config) { return config.lambdas(); }

template <class Scalar>
json matrix_json(const Matrix<Scalar>& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json_value(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json diagnostics_json(const SolveDiagnostics& d) {
    json kinds = json::array();
    for (SolveKind k : d.row_kinds) kinds.push_back(to_string(k));
    return {{"column_rank", d.column_rank}, {"row_kinds", kinds}, {"row_residuals", d.row_residuals}};
}

std::vector<Triple> triples_for(std::size_t lines) {
    if (lines == 3) return {kAllTriples[0]};
    return {kAllTriples.begin(), kAllTriples.end()};
}

// ---------------------------------------------------------------------------
// Commands

void verify_algebra_exact(const RunConfig& c, JsonReport& report) {
    const std::size_t trials = c.lambdas.empty() ? c.trials : 1;
    for (std::size_t t = 0; t < trials; ++t) {
        ExactConfig config = [&] {
            if (!c.lambdas.empty()) return exact_override(c);
            std::mt19937_64 rng = trial_rng(c.seed, t);
            return sample_exact_config(rng, 4, bounds_of(c));
        }();
        json triples = json::array();
        bool ok = true;
        for (const Triple& triple : triples_for(config.line_count())) {
            const AlgebraResidual res = verify_algebra(triple, config, s_for_triple(triple, config));
            ok = ok && res.exact_zero;
            triples.push_back({{"triple", to_string(triple)}, {"exact_zero", res.exact_zero}, {"max_abs", res.max_abs}});
        }
        report.add(Check{"algebra trial " + std::to_string(t), ok ? Status::Pass : Status::Fail,
                         {{"draw", draw_json(config)}, {"source", "closed"}, {"triples", triples}}});
    }
}

void verify_algebra_approx(const RunConfig& c, JsonReport& report) {
    const std::size_t trials = c.lambdas.empty() ? c.trials : 1;
    const Tolerance tol{c.tol};
    for (std::size_t t = 0; t < trials; ++t) {
        ApproxConfig config = [&] {
            if (!c.lambdas.empty()) return approx_override(c);
            std::mt19937_64 rng = trial_rng(c.seed, t);
            return sample_approx_config(rng, c.k(), 4, bounds_of(c));
        }();
        json triples = json::array();
        bool ok = true;
        for (const Triple& triple : triples_for(config.line_count())) {
            const AlgebraSystem<double> sys = algebra_system(triple, config);
            const SolvedS<double> solved = solve_s(triple, config, tol);
            const AlgebraResidual res = verify_algebra(sys, solved.s);
            ok = ok && res.relative() <= kAlgebraResidualBound && !solved.diagnostics.any_inconsistent();
            triples.push_back({{"triple", to_string(triple)},
                               {"relative_residual", res.relative()},
                               {"max_abs", res.max_abs},
                               {"unique", solved.diagnostics.all_unique()},
                               {"diagnostics", diagnostics_json(solved.diagnostics)}});
        }
        report.add(Check{"algebra trial " + std::to_string(t), ok ? Status::Pass : Status::Fail,
                         {{"draw", draw_json(config)}, {"source", "solved"}, {"triples", triples}}});
    }
}

json outcome_json(const TetraOutcome& o) {
    json j{{"source", to_string(o.source)},
           {"exact_equal", o.exact_equal},
           {"max_abs", o.max_abs},
           {"scale", o.scale},
           {"relative", o.relative()}};
    if (o.ranks) j["ranks"] = *o.ranks;
    if (o.eq1_max_residual) j["eq1_max_residual"] = *o.eq1_max_residual;
    return j;
}

void add_tetra_records(const TetraReport& tr, Status pass_status, JsonReport& report) {
    for (const TetraTrialRecord& rec : tr.records) {
        json payload{{"draw", rec.draw}, {"outcome", outcome_json(rec.outcome)}};
        if (!rec.error.empty()) payload["error"] = rec.error;
        const Status status = !rec.error.empty() ? Status::Fail : (rec.passed ? pass_status : Status::Fail);
        report.add(Check{"tetrahedron trial " + std::to_string(rec.index), status, std::move(payload)});
    }
    report.set_summary({{"mode", to_string(tr.mode)},
                        {"seed", tr.seed},
                        {"trials", tr.trials},
                        {"failures", tr.failures},
                        {"max_residual", tr.max_residual}});
}

void verify_tetrahedron(const RunConfig& c, JsonReport& report) {
    if (!c.lambdas.empty()) {
        TetraReport tr;
        tr.mode = c.mode;
        tr.seed = c.seed;
        tr.trials = 1;
        TetraTrialRecord rec;
        Status pass_status = Status::Pass;
        if (c.mode == ScalarMode::Exact) {
            const ExactConfig config = exact_override(c);
            rec.draw = draw_json(config).get<std::vector<std::string>>();
            rec.outcome = tetra_residual(config, SSource::Closed);
            rec.passed = rec.outcome.exact_equal;
        } else {
            const ApproxConfig config = approx_override(c);
            for (double l : config.lambdas()) rec.draw.push_back(format_double(l));
            const bool closed = c.k() == 0.0;
            rec.outcome = tetra_residual(config, closed ? SSource::Closed : SSource::Solved, Tolerance{c.tol});
            rec.passed = !closed || rec.outcome.relative() <= kFloatTetraBound;
            if (!closed) pass_status = Status::Info;
        }
        tr.failures = rec.passed ? 0 : 1;
        tr.max_residual = rec.outcome.max_abs;
        tr.records.push_back(std::move(rec));
        add_tetra_records(tr, pass_status, report);
        return;
    }
    if (c.mode == ScalarMode::Exact) {
        add_tetra_records(identity_test(c.trials, c.seed, bounds_of(c), trial_threads()), Status::Pass, report);
        return;
    }
    const bool closed = c.k() == 0.0;
    const std::optional<double> threshold = closed ? std::optional<double>(kFloatTetraBound) : std::nullopt;
    const TetraReport tr =
        approx_tetra_test(c.k(), c.trials, c.seed, bounds_of(c), trial_threads(), threshold, Tolerance{c.tol});
    add_tetra_records(tr, closed ? Status::Pass : Status::Info, report);
}

template <class Scalar>
void emit_s(const RunConfig& c, const SpectralConfig<Scalar>& config, JsonReport& report) {
    const Triple triple{c.triple[0], c.triple[1], c.triple[2]};
    try {
        check_triple(triple, config.line_count());
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    json payload{{"triple", to_string(triple)}, {"draw", draw_json(config)}, {"source", c.source}};
    SMatrix<Scalar> s;
    if (c.source == "closed") {
        s = s_for_triple(triple, config);
    } else {
        SolvedS<Scalar> solved = solve_s(triple, config, Tolerance{c.tol});
        payload["diagnostics"] = diagnostics_json(solved.diagnostics);
        s = std::move(solved.s);
    }
    payload["body"] = matrix_json(s.body);
    const AlgebraResidual res = verify_algebra(triple, config, s);
    payload["algebra_exact_zero"] = res.exact_zero;
    payload["algebra_relative_residual"] = res.relative();
    const bool ok = ScalarTraits<Scalar>::mode == ScalarMode::Exact ? res.exact_zero
                                                                    : res.relative() <= kAlgebraResidualBound;
    report.add(Check{"s-matrix " + to_string(triple), ok ? Status::Pass : Status::Fail, std::move(payload)});
}

void solve_s_command(const RunConfig& c, JsonReport& report) {
    const int lines = std::max(3, c.triple.empty() ? 3 : c.triple.back());
    if (c.mode == ScalarMode::Exact) {
        if (!c.lambdas.empty()) {
            emit_s(c, exact_override(c), report);
        } else {
            std::mt19937_64 rng = trial_rng(c.seed, 0);
            emit_s(c, sample_exact_config(rng, static_cast<std::size_t>(lines), bounds_of(c)), report);
        }
    } else {
        if (!c.lambdas.empty()) {
            emit_s(c, approx_override(c), report);
        } else {
            std::mt19937_64 rng = trial_rng(c.seed, 0);
            emit_s(c, sample_approx_config(rng, c.k(), static_cast<std::size_t>(lines), bounds_of(c)), report);
        }
    }
}

void survey(const RunConfig& c, JsonReport& report, std::ostream& out) {
    const SurveyReport sr = elliptic_survey(c.k_grid, c.trials, c.seed, bounds_of(c), trial_threads(), Tolerance{c.tol});
    std::size_t deficient = 0;
    double worst_control = 0.0;
    for (const SurveyRow& row : sr.rows) {
        const std::string tag = "k=" + format_double(row.k) + " trial=" + std::to_string(row.trial);
        json common{{"k", row.k}, {"trial", row.trial}, {"lambdas", row.lambdas}, {"min_rank", row.min_rank},
                    {"rank_deficient", row.rank_deficient}};
        if (!row.error.empty()) {
            common["error"] = row.error;
            report.add(Check{"eq1_control " + tag, Status::Fail, common});
            continue;
        }
        deficient += row.rank_deficient ? 1 : 0;
        worst_control = std::max(worst_control, row.eq1_max_residual);
        json control = common;
        control["eq1_max_residual"] = row.eq1_max_residual;
        const Status control_status = row.rank_deficient
                                          ? Status::Info
                                          : (row.eq1_max_residual <= kAlgebraResidualBound ? Status::Pass : Status::Fail);
        report.add(Check{"eq1_control " + tag, control_status, std::move(control)});
        json finding = std::move(common);
        finding["tetra_residual"] = row.tetra_residual;
        report.add(Check{"tetrahedron_residual " + tag, Status::Info, std::move(finding)});
    }
    report.set_summary({{"rows", sr.rows.size()}, {"rank_deficient_rows", deficient}, {"max_eq1_residual", worst_control}});

    if (!c.csv_path.empty()) {
        if (c.csv_path == "-") {
            write_survey_csv(out, sr);
        } else {
            std::ofstream csv(c.csv_path, std::ios::binary);
            if (!csv) throw UsageError("cannot write CSV to '" + c.csv_path + "'");
            write_survey_csv(csv, sr);
        }
    }
}

// ---------------------------------------------------------------------------

struct Options {
    RunConfig config;
    std::string mode_text = "exact";
    std::string k_text;
    std::string lambdas_text;
    std::string triple_text = "1,2,3";
};

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_reals(const std::string& text, const char* flag) {
    std::vector<double> out;
    for (const std::string& item : split(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + " entry '" + item + "' is not a real number");
        }
    }
    return out;
}

const std::map<std::string, std::size_t> kDefaultTrials{
    {"verify-algebra", 20}, {"verify-tetrahedron", 100}, {"solve-s", 1}, {"survey", 10}, {"selftest", 1}};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& description, Options& o) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--mode", o.mode_text, "Scalar backend: exact (k = 0 rationals) or approx (doubles)");
    sub->add_option("--k", o.k_text, "Elliptic modulus, or a comma-separated grid for survey");
    sub->add_option("--trials", o.config.trials, "Number of random trials");
    sub->add_option("--seed", o.config.seed, "Base RNG seed");
    sub->add_option("--bound", o.config.bound, "Numerator/denominator bound for exact draws");
    sub->add_option("--lambdas", o.lambdas_text,
                    "Comma-separated spectral parameters: reals (approx) or half-angle rationals p/q (exact)");
    sub->add_option("--json", o.config.json_path, "Write the JSON report to PATH, or - for standard output");
    sub->add_option("--csv", o.config.csv_path, "Write survey rows as CSV to PATH");
    sub->add_option("--tol", o.config.tol, "Relative rank/consistency tolerance for approx solves");
    sub->add_option("--config", o.config.config_file, "JSON file with k, lambdas and other defaults");
    return sub;
}

int finish(const RunConfig& c, JsonReport& report, double seconds, std::ostream& out, std::ostream& err) {
    report.set_wall_seconds(seconds);
    const std::string text = report.to_json().dump(2) + "\n";
    if (c.json_path == "-") {
        out << text;
    } else if (!c.json_path.empty()) {
        std::ofstream file(c.json_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write JSON to '" << c.json_path << "'\n";
            return kExitUsage;
        }
        file << text;
    }
    std::ostream& summary = (c.json_path == "-" || c.csv_path == "-") ? err : out;
    summary << c.command << ": " << to_string(report.aggregate()) << " (pass " << report.count(Status::Pass)
            << ", fail " << report.count(Status::Fail) << ", info " << report.count(Status::Info) << ")\n";
    return report.exit_code();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact and floating-point verification of tetrahedral Zamolodchikov algebra relations and the "
                 "tetrahedron equation",
                 "tetraverify"};
    app.require_subcommand(1);
    add_command(app, "verify-algebra", "Check the three-R-matrix algebra relation for sampled configs", o);
    add_command(app, "verify-tetrahedron", "Check the tetrahedron equation for the four S-matrices", o);
    CLI::App* solve_cmd = add_command(app, "solve-s", "Dump one S-matrix as JSON", o);
    solve_cmd->add_option("--triple", o.triple_text, "Line triple i,j,k");
    solve_cmd->add_option("--source", o.config.source, "closed (k = 0 closed form) or solved");
    add_command(app, "survey", "Survey algebra and tetrahedron residuals over a k grid", o);
    CLI::App* self_cmd = add_command(app, "selftest", "Run the built-in oracle checks", o);
    self_cmd->add_flag("--inject-fault", o.config.inject_fault, "Perturb the elliptic checks")->group("");

    std::vector<std::string> argv_store{"tetraverify"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : argv_store) argv.push_back(s.data());

    const auto start = std::chrono::steady_clock::now();
    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitPass;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitPass;
        } catch (const CLI::ParseError& e) {
            throw UsageError(e.what());
        }
        RunConfig& c = o.config;
        CLI::App* active = app.get_subcommands().front();
        c.command = active->get_name();
        if (active->count("--trials") == 0) c.trials = kDefaultTrials.at(c.command);
        const std::map<std::string, bool> given{
            {"mode", active->count("--mode") > 0},       {"k", active->count("--k") > 0},
            {"lambdas", active->count("--lambdas") > 0}, {"trials", active->count("--trials") > 0},
            {"seed", active->count("--seed") > 0},       {"bound", active->count("--bound") > 0},
            {"tol", active->count("--tol") > 0}};
        if (c.command == "survey" && !given.at("mode")) o.mode_text = "approx";
        if (active->count("--k") > 0) {
            c.k_grid = parse_reals(o.k_text, "--k");
            if (c.k_grid.empty()) throw UsageError("--k is empty");
        }
        c.lambdas = split(o.lambdas_text);
        if (!c.config_file.empty()) apply_config_file(c, given, o.mode_text);
        c.mode = parse_mode(o.mode_text);
        if (c.command == "solve-s") {
            c.triple.clear();
            for (const std::string& t : split(o.triple_text)) {
                try {
                    c.triple.push_back(std::stoi(t));
                } catch (const std::exception&) {
                    throw UsageError("--triple entry '" + t + "' is not an integer");
                }
            }
            if (c.source.empty()) c.source = (c.mode == ScalarMode::Exact || c.k() == 0.0) ? "closed" : "solved";
        }
        validate(c);

        JsonReport report(c.command, args, config_echo(c));
        if (c.command == "verify-algebra") {
            if (c.mode == ScalarMode::Exact) {
                verify_algebra_exact(c, report);
            } else {
                verify_algebra_approx(c, report);
            }
        } else if (c.command == "verify-tetrahedron") {
            verify_tetrahedron(c, report);
        } else if (c.command == "solve-s") {
            solve_s_command(c, report);
        } else if (c.command == "survey") {
            survey(c, report, out);
        } else if (c.command == "selftest") {
            report.add(run_selftest(SelftestOptions{c.inject_fault}));
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return finish(c, report, seconds, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SamplingError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

}  // namespace tetraverify::cli
