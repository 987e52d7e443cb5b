#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "subdiff/detail/random.hpp"
#include "subdiff/detail/text.hpp"
#include "subdiff/experiment.hpp"
#include "subdiff/gamma.hpp"
#include "subdiff/l1_weights.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/tridiagonal.hpp"

namespace {

using namespace subdiff;

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find(',', begin);
        const std::string part = text.substr(begin, end - begin);
        if (!part.empty()) out.push_back(detail::parse_double(part));
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_doubles(text)) out.push_back(static_cast<int>(v));
    return out;
}

// Shared key=value surface for config files and --set overrides; keys match
// the report echo so a run can be reproduced from its own artifact.
void apply_key(TableConfig& table, bool& noise_specified, const std::string& key,
               const std::string& value) {
    ExperimentConfig& base = table.base;
    if (key == "example") base.example = parse_example(value);
    else if (key == "network") base.network_type = parse_network_type(value);
    else if (key == "alpha") base.alpha = detail::parse_double(value);
    else if (key == "alpha_sequence") base.alpha_sequence = parse_doubles(value);
    else if (key == "noise") {
        base.noise = parse_noise_kind(value);
        noise_specified = true;
    }
    else if (key == "noise_level") base.noise_level = detail::parse_double(value);
    else if (key == "n") base.n = static_cast<int>(detail::parse_int(value));
    else if (key == "epochs") base.epochs = static_cast<int>(detail::parse_int(value));
    else if (key == "batch") base.batch_size = static_cast<int>(detail::parse_int(value));
    else if (key == "learning_rate") base.learning_rate = detail::parse_double(value);
    else if (key == "init") base.init = parse_init_kind(value);
    else if (key == "seed") base.seed = detail::parse_uint(value);
    else if (key == "out_dir") base.out_dir = value;
    else if (key == "levels") table.levels = parse_doubles(value);
    else if (key == "grids") table.grids = parse_ints(value);
    else if (key == "alphas") table.alphas = parse_doubles(value);
    else if (key == "force_retrain") table.force_retrain = value == "1" || value == "true";
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void apply_config_file(TableConfig& table, bool& noise_specified, const std::string& path) {
    const std::string text = detail::read_file(path);
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find('\n', begin);
        std::string line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() != '#') {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config file: bad line '" + line + "'");
            apply_key(table, noise_specified, line.substr(0, eq), line.substr(eq + 1));
        }
        if (end == std::string::npos) break;
        begin = end + 1;
    }
}

struct CliState {
    TableConfig table;
    std::string config_file;
    std::vector<std::string> overrides;
    std::string example = "ex1";
    std::string network = "type1";
    std::string noise = "none";
    std::string init = "uniform";
    std::string alpha_sequence;
    std::string levels, grids, alphas;
    std::uint64_t seed = 0;
    bool noise_specified = false;
};

void add_common_options(CLI::App* cmd, CliState& state) {
    cmd->add_option("--config", state.config_file, "key=value config file");
    cmd->add_option("--set", state.overrides, "override, e.g. --set noise_level=0.5");
    cmd->add_option("--example", state.example, "ex1 | ex2 | ex3");
    cmd->add_option("--type", state.network, "type1 | type2");
    cmd->add_option("--alpha", state.table.base.alpha, "fractional order in (0,1]");
    cmd->add_option("--alpha-seq", state.alpha_sequence, "type2 training sequence");
    cmd->add_option("--noise", state.noise, "none | uniform | gaussian");
    cmd->add_option("--level", state.table.base.noise_level, "noise level");
    cmd->add_option("--n", state.table.base.n, "intervals per axis (h = 1/n)");
    cmd->add_option("--epochs", state.table.base.epochs, "0 = benchmark default");
    cmd->add_option("--batch", state.table.base.batch_size, "mini-batch size");
    cmd->add_option("--lr", state.table.base.learning_rate, "Adam learning rate");
    cmd->add_option("--init", state.init, "uniform | normal");
    cmd->add_option("--seed", state.seed, "explicit RNG seed");
    cmd->add_option("--out", state.table.base.out_dir, "output directory");
}

// Precedence: defaults < config file < --set < dedicated flags.
void finalize(CLI::App* cmd, CliState& state) {
    TableConfig flags = state.table;  // values as set by CLI11
    state.table = TableConfig{};
    if (!state.config_file.empty())
        apply_config_file(state.table, state.noise_specified, state.config_file);
    for (const std::string& kv : state.overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        apply_key(state.table, state.noise_specified, kv.substr(0, eq), kv.substr(eq + 1));
    }
    const auto touched = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (touched("--example")) state.table.base.example = parse_example(state.example);
    if (touched("--type")) state.table.base.network_type = parse_network_type(state.network);
    if (touched("--alpha")) state.table.base.alpha = flags.base.alpha;
    if (touched("--alpha-seq"))
        state.table.base.alpha_sequence = parse_doubles(state.alpha_sequence);
    if (touched("--noise")) {
        state.table.base.noise = parse_noise_kind(state.noise);
        state.noise_specified = true;
    }
    if (touched("--level")) state.table.base.noise_level = flags.base.noise_level;
    if (touched("--n")) state.table.base.n = flags.base.n;
    if (touched("--epochs")) state.table.base.epochs = flags.base.epochs;
    if (touched("--batch")) state.table.base.batch_size = flags.base.batch_size;
    if (touched("--lr")) state.table.base.learning_rate = flags.base.learning_rate;
    if (touched("--init")) state.table.base.init = parse_init_kind(state.init);
    if (touched("--seed")) state.table.base.seed = state.seed;
    if (touched("--out")) state.table.base.out_dir = flags.base.out_dir;
    if (touched("--levels")) state.table.levels = parse_doubles(state.levels);
    if (touched("--grids")) state.table.grids = parse_ints(state.grids);
    if (touched("--alphas")) state.table.alphas = parse_doubles(state.alphas);
    if (touched("--force-retrain")) state.table.force_retrain = true;

    // Unspecified noise kind: fall back to the benchmark pairing when a
    // positive level is requested anywhere.
    if (!state.noise_specified && state.table.base.noise == NoiseKind::none) {
        const bool is_table = cmd->get_option_no_throw("--levels") != nullptr;
        bool wants_noise = state.table.base.noise_level > 0.0;
        if (is_table)
            for (double level : state.table.levels) wants_noise = wants_noise || level > 0.0;
        if (wants_noise)
            state.table.base.noise = state.table.base.example == ExampleId::ex3
                                         ? NoiseKind::gaussian
                                         : NoiseKind::uniform;
    }
}

int run_selftest() {
    int failures = 0;
    const auto check = [&](const char* name, bool ok) {
        std::printf("%s %s\n", ok ? "[ok]  " : "[FAIL]", name);
        if (!ok) ++failures;
    };

    check("gamma identities", std::abs(gamma_fn(1.0) - 1.0) < 1e-14 &&
                                  std::abs(gamma_fn(5.0) - 24.0) < 24.0 * 1e-13);

    bool telescoping = true;
    for (double alpha : {0.1, 0.5, 0.9}) {
        const L1Weights w = l1_weights(alpha, 0.01, 50);
        for (int n = 1; n <= 50; ++n) {
            double sum = w.omega0() + w.initial_coefficient(n);
            for (int j = 1; j <= n - 1; ++j) sum += w.weight(j);
            telescoping = telescoping && std::abs(sum) <= 1e-12 * w.omega0();
        }
    }
    check("L1 weights telescope to zero", telescoping);

    {
        const double alpha = 0.5, tau = 0.01;
        const L1Weights w = l1_weights(alpha, tau, 100);
        std::vector<double> history(101);
        for (int k = 0; k <= 100; ++k) history[k] = k * tau;
        const double got = caputo_apply(w, history);
        const double expected = std::pow(1.0, 1.0 - alpha) / gamma_fn(2.0 - alpha);
        check("L1 exact on linear input", std::abs(got - expected) <= 1e-10 * expected);
    }

    {
        std::mt19937_64 gen(7);
        const std::size_t n = 64;
        TridiagonalSystem sys;
        sys.diag.resize(n);
        sys.lower.resize(n - 1);
        sys.upper.resize(n - 1);
        sys.rhs.resize(n);
        auto u01 = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
        for (std::size_t i = 0; i + 1 < n; ++i) {
            sys.lower[i] = u01() - 0.5;
            sys.upper[i] = u01() - 0.5;
        }
        for (std::size_t i = 0; i < n; ++i) {
            sys.diag[i] = 2.5 + u01();
            sys.rhs[i] = u01();
        }
        const std::vector<double> x = thomas_solve(sys);
        double max_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = sys.diag[i] * x[i] - sys.rhs[i];
            if (i > 0) r += sys.lower[i - 1] * x[i - 1];
            if (i + 1 < n) r += sys.upper[i] * x[i + 1];
            max_res = std::max(max_res, std::abs(r));
        }
        check("Thomas solve residual", max_res <= 1e-12);
    }

    {
        const Grid grid(25, 25);
        const NoiseSpec spec{NoiseKind::uniform, 0.5, 42};
        const Field f = inject_noise(
            grid, [](double x, double t) { return benchmark_source(ExampleId::ex1, x, t); },
            spec);
        const Field u = forward_solve(Problem(grid, 0.5, benchmark_initial, f));
        const DiscoveryTarget target = discover_source(u, 0.5, grid);
        double worst = 0.0, scale = 0.0;
        for_each_masked(grid, [&](int m, int n) {
            worst = std::max(worst, std::abs(target.target(m, n) - f(m, n)));
            scale = std::max(scale, std::abs(f(m, n)));
        });
        check("forward/inverse roundtrip", worst <= 1e-10 * scale);
    }

    {
        const std::vector<int> widths{2, 5, 1};
        const Mlp mlp = init_params(widths, 11);
        Matrix batch(3, 2);
        batch << 0.21, 0.73, 0.64, 0.12, 0.37, 0.58;
        const ForwardCache cache = forward_cached(mlp, batch);
        const Matrix out_grad = Matrix::Ones(3, 1);
        const Gradients grads = backward(mlp, cache, out_grad);

        Mlp probe = mlp;
        const double h = 1e-6;
        const double base = forward(mlp, batch).sum();
        probe.weights[0](0, 0) += h;
        const double bumped = forward(probe, batch).sum();
        const double fd = (bumped - base) / h;
        check("gradient vs finite difference",
              std::abs(grads.weights[0](0, 0) - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }

    std::printf(failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subdiffusion source discovery: L1 forward solver, exact inverse "
                 "operator, and surrogate training"};
    app.require_subcommand(1);

    CliState state;

    CLI::App* run = app.add_subcommand("run", "run a single experiment cell");
    add_common_options(run, state);

    CLI::App* table = app.add_subcommand("table", "run a (noise level x grid) x alpha sweep");
    add_common_options(table, state);
    table->add_option("--levels", state.levels, "noise level rows");
    table->add_option("--grids", state.grids, "grid rows (intervals per axis)");
    table->add_option("--alphas", state.alphas, "alpha columns");
    table->add_flag("--force-retrain", "type1: retrain per alpha column");

    std::string export_run, export_to;
    CLI::App* exp = app.add_subcommand("export", "re-dump the field CSV of a finished run");
    exp->add_option("--run", export_run, "run directory")->required();
    exp->add_option("--to", export_to, "destination CSV path")->required();

    app.add_subcommand("selftest", "quick invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            finalize(run, state);
            const RunArtifacts artifacts = run_experiment(state.table.base);
            std::printf("relative_error=%s\n",
                        subdiff::detail::format_double(artifacts.error).c_str());
            std::printf("artifacts=%s\n", artifacts.dir.string().c_str());
            std::fprintf(stderr, "train wall time: %.1fs\n", artifacts.report.wall_seconds);
            return 0;
        }
        if (table->parsed()) {
            finalize(table, state);
            const ResultTable result = run_table(state.table);
            std::fputs(render_table_csv(result).c_str(), stdout);
            bool clean = result.complete();
            for (const auto& row : result.notes)
                for (const std::string& note : row)
                    if (!note.empty()) {
                        std::fprintf(stderr, "cell failed: %s\n", note.c_str());
                        clean = false;
                    }
            return clean ? 0 : 2;
        }
        if (exp->parsed()) {
            export_fields(export_run, export_to);
            std::printf("exported %s\n", export_to.c_str());
            return 0;
        }
        return run_selftest();
    } catch (const StageError& e) {
        std::fprintf(stderr, "error at stage '%s': %s\n", e.stage().c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
