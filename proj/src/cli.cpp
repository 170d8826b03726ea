#include "choqmax/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "choqmax/content.hpp"
#include "choqmax/coverings.hpp"
#include "choqmax/grid.hpp"
#include "choqmax/io.hpp"
#include "choqmax/lab.hpp"
#include "choqmax/operators.hpp"
#include "choqmax/rng.hpp"

namespace choqmax {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    return out;
}

DyadicCube parse_cube_token(const std::string& text, const GridSpec& spec) {
    std::vector<long> fields;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string piece =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        char* end = nullptr;
        const long v = std::strtol(piece.c_str(), &end, 10);
        if (end == piece.c_str() || *end != '\0' || v < 0)
            throw ParamError("--closed-form expects nonnegative integers level,i1,...,in");
        fields.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (fields.size() != static_cast<std::size_t>(spec.n) + 1)
        throw ParamError("--closed-form expects level,i1,...,in with n=" +
                         std::to_string(spec.n) + " coordinates");
    DyadicCube cube(static_cast<int>(fields[0]), {});
    for (std::size_t i = 1; i < fields.size(); ++i)
        cube.index.push_back(static_cast<std::uint32_t>(fields[i]));
    validate_cube(cube, spec);
    return cube;
}

struct VerifyOptions {
    std::string theorem;
    int n = 2;
    int L = 4;
    double d = 1.5;
    double alpha = 0.5;
    double gamma = 0.0;
    double p = 1.0;
    double q = 1.5;
    std::string generator = "mixed";
    int max_cubes = 4;
    double beta = -1.0;
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::string out_prefix = "report";
    std::string replay_f;
    std::string replay_w;
    std::uint64_t steps = 200;
    std::uint64_t batch = 4;
    bool p_given = false;
    bool q_given = false;
};

void add_param_flags(CLI::App* cmd, VerifyOptions& o) {
    cmd->add_option("--n", o.n, "Grid dimension")->capture_default_str();
    cmd->add_option("--L", o.L, "Grid depth")->capture_default_str();
    cmd->add_option("--d", o.d, "Content dimension d in (0, n]")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "Maximal operator order in [0, n)")
        ->capture_default_str();
    cmd->add_option("--gamma", o.gamma, "Weight transform share in [0, alpha]")
        ->capture_default_str();
    cmd->add_option("--p", o.p, "First exponent (strong box; weak box derives p = d/n)")
        ->capture_default_str();
    cmd->add_option("--q", o.q, "Second exponent")->capture_default_str();
    cmd->add_option("--generator", o.generator,
                    "Instance family: indsum|lacunary|rough|a1|const|mixed")
        ->capture_default_str();
    cmd->add_option("--max-cubes", o.max_cubes, "Cube count cap for indsum instances")
        ->capture_default_str();
    cmd->add_option("--beta", o.beta, "Power-law exponent for a1 weights (default n/2)")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

TheoremParams build_params(TheoremId id, const GridSpec& spec, const VerifyOptions& o) {
    if (theorem_uses_weak_box(id)) {
        // ov-weak pins q = p = d/n, so a user --p/--q pair only steers the
        // strong half of the combined token; for the other weak suites q is
        // free and a --p contradicting p = d/n is an error.
        const double q = id == TheoremId::ov_weak ? o.d / spec.n : o.q;
        TheoremParams tp = TheoremParams::weak_type(spec, o.d, o.alpha, o.gamma, q);
        if (id != TheoremId::ov_weak && o.p_given && o.p != tp.p)
            throw ParamError("weak type requires p = d/n (leave --p unset)");
        return tp;
    }
    return TheoremParams::strong_type(spec, o.d, o.alpha, o.gamma, o.p, o.q);
}

std::vector<TheoremId> resolve_tokens(const std::string& token) {
    if (token == "ov") return {TheoremId::ov_strong, TheoremId::ov_weak};
    const auto id = parse_theorem_token(token);
    if (!id)
        throw ParamError(
            "unknown theorem id '" + token +
            "' (expected lemma21|strong|weak|eq21|adams|tang|ov|remark14-strong|remark14-weak)");
    return {*id};
}

bool is_conjecture(TheoremId id) {
    return id == TheoremId::conj_strong || id == TheoremId::conj_weak;
}

void print_suite_line(std::ostream& out, TheoremId id, const TheoremParams& tp,
                      const EstimatedConstant& est, std::uint64_t violations) {
    const char* status =
        is_conjecture(id) ? "candidate" : (violations > 0 ? "violation" : "ok");
    out << theorem_token(id) << ": n=" << tp.spec.n << " L=" << tp.spec.L << " d="
        << format_value(tp.d) << " alpha=" << format_value(tp.alpha) << " gamma="
        << format_value(tp.gamma) << " p=" << format_value(tp.p) << " q=" << format_value(tp.q)
        << " delta=" << format_value(tp.delta) << " trials=" << est.trials << " sup_ratio="
        << format_value(est.sup_ratio) << " violations=" << violations << " status=" << status
        << "\n";
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    const auto ids = resolve_tokens(o.theorem);

    std::ofstream jsonl = open_out(o.out_prefix + ".jsonl");
    std::ofstream csv = open_out(o.out_prefix + ".csv");
    csv << summary_csv_header() << "\n";

    bool proven_violation = false;
    if (!o.replay_f.empty() || !o.replay_w.empty()) {
        if (o.replay_f.empty() || o.replay_w.empty())
            throw ParamError("replay requires both --f and --w");
        GridFunction f = read_grid_function_file(o.replay_f);
        GridFunction w = read_grid_function_file(o.replay_w);
        if (!(f.spec() == w.spec())) throw ParamError("--f and --w grids differ");
        VerifyOptions adjusted = o;
        adjusted.n = f.spec().n;
        adjusted.L = f.spec().L;
        const Instance inst{std::move(f), std::move(w)};
        for (TheoremId id : ids) {
            const TheoremParams tp = build_params(id, inst.f.spec(), adjusted);
            RatioReport report = run_single(id, tp, inst);
            report.seed = o.seed;
            report.generator_id = "replay";
            jsonl << report_to_jsonl(report) << "\n";
            EstimatedConstant est{tp, report.ratio, report.instance_digest, 1, "replay"};
            const std::uint64_t violations = report.violation() ? 1 : 0;
            csv << summary_csv_row(theorem_token(id), tp, est, violations) << "\n";
            print_suite_line(out, id, tp, est, violations);
            if (!is_conjecture(id) && violations > 0) proven_violation = true;
        }
        return proven_violation ? 1 : 0;
    }

    const GridSpec spec(o.n, o.L);
    for (TheoremId id : ids) {
        const TheoremParams tp = build_params(id, spec, o);
        const GeneratorSpec gen{o.generator, spec, o.max_cubes, o.beta};
        const SuiteResult suite = run_suite(id, tp, gen, o.trials, o.seed);
        for (const auto& report : suite.reports) jsonl << report_to_jsonl(report) << "\n";
        csv << summary_csv_row(theorem_token(id), tp, suite.constant, suite.violations) << "\n";
        print_suite_line(out, id, tp, suite.constant, suite.violations);
        if (!is_conjecture(id) && suite.violations > 0) proven_violation = true;
    }
    return proven_violation ? 1 : 0;
}

int cmd_search(const VerifyOptions& o, std::ostream& out) {
    const auto ids = resolve_tokens(o.theorem);
    if (ids.size() != 1)
        throw ParamError("search expects a single variant (use ov-strong or ov-weak)");
    const TheoremId id = ids[0];

    std::vector<int> depths;
    if (is_conjecture(id))
        depths = {3, 4, 5};
    else
        depths = {o.L};

    std::ofstream jsonl = open_out(o.out_prefix + ".jsonl");
    std::ofstream csv = open_out(o.out_prefix + ".csv");
    csv << "theorem_id,n,L,d,alpha,gamma,p,q,delta,generator_id,steps,batch,sup_ratio,"
           "argmax_digest\n";

    for (int depth : depths) {
        const GridSpec spec(o.n, depth);
        const TheoremParams tp = build_params(id, spec, o);
        const GeneratorSpec gen{o.generator, spec, o.max_cubes, o.beta};

        bool have_best = false;
        ClimbResult best{EstimatedConstant{}, Instance{GridFunction::constant(spec, 0.0),
                                                       GridFunction::constant(spec, 0.0)},
                         {}};
        std::uint64_t best_seed = 0;
        for (std::uint64_t b = 0; b < o.batch; ++b) {
            const std::uint64_t init = substream_seed(o.seed, b);
            ClimbResult climb = hill_climb_adversary(id, tp, gen, init, o.steps);
            if (!have_best || climb.constant.sup_ratio > best.constant.sup_ratio) {
                best = std::move(climb);
                best_seed = init;
                have_best = true;
            }
        }
        if (!have_best) throw ParamError("search requires batch >= 1");

        const std::string depth_tag = ".L" + std::to_string(depth);
        write_grid_function_file(o.out_prefix + depth_tag + ".best_f.csv", best.best.f);
        write_grid_function_file(o.out_prefix + depth_tag + ".best_w.csv", best.best.w);

        RatioReport report = run_single(id, tp, best.best);
        report.seed = best_seed;
        report.generator_id = gen.id;
        jsonl << report_to_jsonl(report) << "\n";

        csv << theorem_token(id) << ',' << spec.n << ',' << depth;
        for (double v : {tp.d, tp.alpha, tp.gamma, tp.p, tp.q, tp.delta})
            csv << ',' << format_value(v);
        csv << ',' << gen.id << ',' << o.steps << ',' << o.batch << ','
            << format_value(best.constant.sup_ratio) << ',' << best.constant.argmax_digest
            << "\n";

        out << "search " << theorem_token(id) << ": L=" << depth << " steps=" << o.steps
            << " batch=" << o.batch << " sup_ratio=" << format_value(best.constant.sup_ratio)
            << " accepted=" << best.accepted_ratios.size() << " status="
            << (is_conjecture(id) ? "candidate" : "ok") << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dyadic maximal operators, weighted Hausdorff contents, and inequality suites "
                 "on finite grids"};
    app.set_config("--config", "", "Read options from a TOML file (flags override)");
    bool dump_config = false;
    app.add_flag("--dump-config", dump_config,
                 "Print the canonical configuration and exit without running")
        ->configurable(false);

    // maximal
    std::string m_input;
    std::string m_out;
    double m_alpha = 0.0;
    std::string m_closed_form;
    CLI::App* maximal =
        app.add_subcommand("maximal", "Apply the fractional maximal operator to a grid file");
    maximal->add_option("-i,--input", m_input, "Input grid-function CSV")->required();
    maximal->add_option("-o,--out", m_out, "Output grid-function CSV")->required();
    maximal->add_option("--alpha", m_alpha, "Operator order in [0, n)")->capture_default_str();
    maximal->add_option("--closed-form", m_closed_form,
                        "level,i1,...,in: write the shell form of that cube's indicator "
                        "(input supplies the grid only)");

    // content
    std::string c_set;
    std::string c_weight;
    double c_d = 1.0;
    CLI::App* content_cmd =
        app.add_subcommand("content", "Weighted Hausdorff content of a cell set with witness");
    content_cmd->add_option("--set", c_set, "Cell-set file")->required();
    content_cmd->add_option("--weight", c_weight, "Weight grid-function CSV")->required();
    content_cmd->add_option("--d", c_d, "Content dimension d in (0, n]")->required();

    // verify
    VerifyOptions v;
    CLI::App* verify = app.add_subcommand("verify", "Run an inequality suite");
    verify->add_option("theorem", v.theorem,
                       "lemma21|strong|weak|eq21|adams|tang|ov|remark14-strong|remark14-weak")
        ->required();
    add_param_flags(verify, v);
    verify->add_option("--trials", v.trials, "Generated instances per suite")
        ->capture_default_str();
    verify->add_option("--out", v.out_prefix, "Output prefix for .jsonl and .csv")
        ->capture_default_str();
    verify->add_option("--f", v.replay_f, "Replay: grid-function CSV for f");
    verify->add_option("--w", v.replay_w, "Replay: grid-function CSV for w");

    // search
    VerifyOptions s;
    s.out_prefix = "search";
    CLI::App* search = app.add_subcommand("search", "Adversarial hill-climb search");
    search->add_option("variant", s.theorem,
                       "strong|weak|adams|tang|ov-strong|ov-weak|remark14-strong|remark14-weak")
        ->required();
    add_param_flags(search, s);
    search->add_option("--steps", s.steps, "Hill-climb steps per start")->capture_default_str();
    search->add_option("--batch", s.batch, "Independent starts")->capture_default_str();
    search->add_option("--out", s.out_prefix, "Output prefix")->capture_default_str();

    app.require_subcommand(0, 1);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("choqmax");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (dump_config) {
            out << app.config_to_str(true, true);
            return 0;
        }
        if (maximal->parsed()) {
            const GridFunction f = read_grid_function_file(m_input);
            const GridFunction result =
                m_closed_form.empty()
                    ? fractional_maximal(f, m_alpha)
                    : maximal_on_indicator_closed_form(parse_cube_token(m_closed_form, f.spec()),
                                                       m_alpha, f.spec());
            write_grid_function_file(m_out, result);
            return 0;
        }
        if (content_cmd->parsed()) {
            const CellSet set = read_cell_set_file(c_set);
            const GridFunction w = read_grid_function_file(c_weight);
            if (!(set.spec() == w.spec())) throw ParamError("set and weight grids differ");
            const ContentParams cp(c_d, w);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", content(set, cp));
            out << buf << "\n";
            for (const auto& cube : optimal_cover(set, cp).cubes) {
                out << cube.level;
                for (const auto c : cube.index) out << ' ' << c;
                out << "\n";
            }
            return 0;
        }
        if (verify->parsed()) {
            v.p_given = verify->count("--p") > 0;
            v.q_given = verify->count("--q") > 0;
            return cmd_verify(v, out);
        }
        if (search->parsed()) {
            s.p_given = search->count("--p") > 0;
            s.q_given = search->count("--q") > 0;
            return cmd_search(s, out);
        }
        err << app.help();
        return 3;
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const ParamError& e) {
        err << "parameter error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "validity violation: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace choqmax
