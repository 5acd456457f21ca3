#include "selqed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace selqed::cli {

namespace {

using nlohmann::json;

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

// Support top of the initial state: the last number level carrying real weight.
int initial_support_top(const InitialState& initial) {
    if (initial.is_fock) return initial.fock_n;
    const double a2 = std::norm(initial.alpha);
    return static_cast<int>(std::ceil(a2 + 6.0 * std::sqrt(a2)));
}

int resolve_dim(const RunConfig& config, int wanted) {
    if (config.dim_override > 0) return config.dim_override;
    return wanted;
}

std::vector<Complex> build_grid_points(const GridSpec& grid) {
    if (grid.step <= 0.0) throw std::invalid_argument("grid: step must be > 0");
    if (grid.re_max < grid.re_min || grid.im_max < grid.im_min)
        throw std::invalid_argument("grid: empty range");
    const auto count = [&](double lo, double hi) {
        return static_cast<int>(std::floor((hi - lo) / grid.step + 1e-9)) + 1;
    };
    const int nre = count(grid.re_min, grid.re_max);
    const int nim = count(grid.im_min, grid.im_max);
    std::vector<Complex> points;
    points.reserve(static_cast<std::size_t>(nre) * nim);
    for (int i = 0; i < nre; ++i)
        for (int j = 0; j < nim; ++j)
            points.emplace_back(grid.re_min + i * grid.step, grid.im_min + j * grid.step);
    return points;
}

int guard(const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const InfeasiblePreparationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kInfeasible;
    } catch (const DegenerateBranchError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kInfeasible;
    } catch (const TruncationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kTruncation;
    } catch (const ConvergenceError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kNoConvergence;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kConfigError;
    }
}

void warn_if_marginal(const RamanParams& params) {
    if (params.dispersive_warning)
        std::cerr << "warning: detuning only marginally dominates the couplings "
                     "(ratio below 10)\n";
}

}  // namespace

std::string fmt(double value) {
    if (value == 0.0) value = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

InitialState parse_initial(const std::string& text) {
    InitialState state;
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("initial: expected fock:N or coherent:RE,IM");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    try {
        if (kind == "fock") {
            state.is_fock = true;
            state.fock_n = std::stoi(rest);
            if (state.fock_n < 0) throw std::invalid_argument("negative");
        } else if (kind == "coherent") {
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("coherent needs RE,IM");
            state.alpha = Complex(std::stod(rest.substr(0, comma)),
                                  std::stod(rest.substr(comma + 1)));
        } else {
            throw std::invalid_argument("unknown kind");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("initial: cannot parse '" + text + "'");
    }
    return state;
}

RunConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("config: ") + err.what());
    }
    RunConfig config;
    try {
        const auto& params = doc.at("params");
        config.g_hz = params.at("g_hz").get<double>();
        config.omega_l_hz = params.at("omega_l_hz").get<double>();
        config.delta_hz = params.at("delta_hz").get<double>();
        config.initial = parse_initial(doc.at("initial").get<std::string>());
        config.n_selected = doc.value("n_selected", 0);
        config.dim_override = doc.value("dim", 0);
        config.atoms = doc.value("atoms", 1);
        config.n_max = doc.value("n_max", -1);
        config.series_cutoff = doc.value("series_cutoff", -1);
        if (doc.contains("grid")) {
            const auto& g = doc.at("grid");
            config.grid.re_min = g.value("re_min", -3.5);
            config.grid.re_max = g.value("re_max", 3.5);
            config.grid.im_min = g.value("im_min", -3.5);
            config.grid.im_max = g.value("im_max", 3.5);
            config.grid.step = g.value("step", 0.1);
        }
        if (doc.contains("delta_over_g_sweep"))
            config.delta_over_g_sweep = doc.at("delta_over_g_sweep").get<std::vector<double>>();
        const std::string mode = doc.value("mode", "det");
        if (mode == "mc")
            config.monte_carlo = true;
        else if (mode != "det")
            throw std::invalid_argument("config: mode must be det or mc");
        config.seed = doc.value("seed", std::uint64_t{1});
        config.atom_count = doc.value("atom_count", long{10000});
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("config: ") + err.what());
    }
    if (config.g_hz < 0.0 || config.omega_l_hz < 0.0)
        throw std::invalid_argument("config: couplings must be >= 0");
    if (config.delta_hz <= 0.0) throw std::invalid_argument("config: delta_hz must be > 0");
    if (config.n_selected < 0) throw std::invalid_argument("config: n_selected must be >= 0");
    if (config.atoms < 1) throw std::invalid_argument("config: atoms must be >= 1");
    if (config.atom_count < 1) throw std::invalid_argument("config: atom_count must be >= 1");
    return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

RunConfig preset_fig2() {
    RunConfig config;
    config.g_hz = 50e3;
    config.omega_l_hz = 50e3 / 30.0;  // coupling ratio 30
    config.delta_hz = 1e6;
    config.n_selected = 5;
    config.initial.is_fock = false;
    config.initial.alpha = Complex(std::sqrt(5.0), 0.0);  // mean photon number 5
    return config;
}

RunConfig preset_fig3() {
    RunConfig config = preset_fig2();
    config.initial = InitialState{true, 6, Complex{}};
    config.grid = GridSpec{};  // [-3.5, 3.5]^2, step 0.1
    return config;
}

RamanParams RunConfig::params() const {
    return RamanParams::from_hz(g_hz, omega_l_hz, delta_hz);
}

FieldState RunConfig::make_initial(const TruncatedFockSpace& space) const {
    if (initial.is_fock) return fock_state(space, initial.fock_n);
    return coherent_state(space, initial.alpha);
}

MeasurementMode RunConfig::mode() const {
    return MeasurementMode{monte_carlo, seed, atom_count};
}

int cmd_prepare_fock(const RunConfig& config, const std::filesystem::path& out_dir) {
    return guard([&] {
        const RamanParams params = config.params();
        warn_if_marginal(params);
        const double a2 = config.initial.is_fock ? 0.0 : std::norm(config.initial.alpha);
        const int top = std::max(config.n_selected, config.initial.is_fock ? config.initial.fock_n : 0) +
                        config.atoms;
        const TruncatedFockSpace space(resolve_dim(config, default_dim(a2, top)));
        const FieldState initial = config.make_initial(space);
        const Eigen::VectorXd p_initial = photon_distribution(initial);

        const FockPrepReport report =
            prepare_fock_sequential(initial, params, config.n_selected, config.atoms);

        const auto dir = ensure_dir(out_dir);
        auto csv = open_out(dir, "b_coefficients.csv");
        csv << "n,q,abs_c,re_b,im_b,abs_b,prefactor,sine_arg,sine_arg_variant,abs_b_variant\n";
        const BranchAmplitudes& branch = report.branch;
        for (int n = 0; n < branch.exact.size(); ++n) {
            csv << n << ',' << fmt(branch.q[n]) << ',' << fmt(std::abs(initial.amps[n])) << ','
                << fmt(branch.exact[n].real()) << ',' << fmt(branch.exact[n].imag()) << ','
                << fmt(std::abs(branch.exact[n])) << ',' << fmt(1.0 / std::sqrt(branch.q[n]))
                << ',' << fmt(branch.arg_exact[n]) << ',' << fmt(branch.arg_variant[n]) << ','
                << fmt(std::abs(branch.variant[n])) << '\n';
        }

        auto dist = open_out(dir, "photon_distribution.csv");
        dist << "n,p_initial,p_conditioned\n";
        const Eigen::VectorXd p_final = photon_distribution(report.conditioned.state);
        for (int n = 0; n < space.dim; ++n)
            dist << n << ',' << fmt(p_initial[n]) << ',' << fmt(p_final[n]) << '\n';

        double success = report.success_probability;
        std::optional<double> sampled;
        if (config.monte_carlo) {
            std::mt19937_64 rng(config.seed);
            std::binomial_distribution<long> draw(config.atom_count,
                                                  std::clamp(success, 0.0, 1.0));
            sampled = double(draw(rng)) / double(config.atom_count);
        }

        auto txt = open_out(dir, "prepare_fock.txt");
        txt << "command = prepare-fock\n"
            << "n_selected = " << config.n_selected << "\n"
            << "atoms = " << report.atoms_used << "\n"
            << "target_fock = " << config.n_selected + report.atoms_used << "\n"
            << "dim = " << space.dim << "\n"
            << "coupling_ratio = " << fmt(params.r()) << "\n"
            << "pi_time_s = " << fmt(report.pi_time_s) << "\n"
            << "fidelity = " << fmt(report.fidelity) << "\n"
            << "fidelity_estimate = " << fmt(report.fidelity_estimate) << "\n"
            << "success_probability = " << fmt(success) << "\n";
        if (sampled)
            txt << "success_probability_sampled = " << fmt(*sampled) << "\n"
                << "atom_count = " << config.atom_count << "\n"
                << "seed = " << config.seed << "\n";
        txt << "selectivity_margin = " << fmt(report.selectivity_margin) << "\n"
            << "selectivity_ok = " << (report.selectivity_ok ? "true" : "false") << "\n"
            << "note = sine_arg is the flip-pulse phase argument; sine_arg_variant drops its "
               "sqrt(n+1) factor and is tabulated for comparison only\n";
    });
}

int cmd_reconstruct_wigner(const RunConfig& config, const std::filesystem::path& out_dir) {
    return guard([&] {
        const RamanParams params = config.params();
        warn_if_marginal(params);
        const std::vector<Complex> points = build_grid_points(config.grid);
        if (points.empty()) throw std::invalid_argument("grid: no points");
        double a2_max = 0.0;
        for (const Complex& p : points) a2_max = std::max(a2_max, std::norm(p));

        // Displaced number statistics spread as (2n+1)|alpha|^2, much wider than a
        // coherent tail, so the basis is sized from that variance.
        const int top = initial_support_top(config.initial);
        const double spread = std::sqrt((2.0 * top + 1.0) * a2_max + top + 1.0);
        const int wanted = static_cast<int>(std::ceil(a2_max + top + 6.0 * spread)) + 10;
        const TruncatedFockSpace space(resolve_dim(config, wanted));
        const FieldState field = config.make_initial(space);

        WignerOptions options;
        options.series_cutoff = config.series_cutoff;
        options.mode = config.mode();

        std::vector<Complex> displacements(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) displacements[i] = -points[i];
        WignerGrid grid = reconstruct_wigner(field, params, displacements, options);

        const StateDescriptor descriptor =
            config.initial.is_fock
                ? StateDescriptor{FockDescriptor{config.initial.fock_n}}
                : StateDescriptor{CoherentDescriptor{config.initial.alpha}};
        fill_exact(grid, descriptor);

        const auto dir = ensure_dir(out_dir);
        auto csv = open_out(dir, "wigner_grid.csv");
        csv << "re_alpha,im_alpha,w_reconstructed,w_exact,abs_diff\n";
        for (const WignerPoint& p : grid.points)
            csv << fmt(p.alpha.real()) << ',' << fmt(p.alpha.imag()) << ','
                << fmt(p.w_reconstructed) << ',' << fmt(*p.w_exact) << ','
                << fmt(std::abs(p.w_reconstructed - *p.w_exact)) << '\n';

        auto txt = open_out(dir, "wigner.txt");
        txt << "command = reconstruct-wigner\n"
            << "grid_points = " << grid.points.size() << "\n"
            << "dim = " << grid.dim << "\n"
            << "series_cutoff = " << grid.series_cutoff << "\n"
            << "max_abs_diff = " << fmt(grid.max_abs_diff()) << "\n"
            << "mode = " << (config.monte_carlo ? "mc" : "det") << "\n";
        if (config.monte_carlo)
            txt << "atom_count = " << config.atom_count << "\n"
                << "seed = " << config.seed << "\n";
    });
}

int cmd_validate_effective(const RunConfig& config, const std::filesystem::path& out_dir) {
    return guard([&] {
        const double a2 = config.initial.is_fock ? 0.0 : std::norm(config.initial.alpha);
        const int top = std::max(config.n_selected, config.initial.is_fock ? config.initial.fock_n : 0) + 1;
        const TruncatedFockSpace space(resolve_dim(config, default_dim(a2, top)));
        const FieldState field = config.make_initial(space);
        const SelectionTarget target(config.n_selected);

        struct Row {
            double ratio;
            double p_full, p_eff, diff, h_pop, drift;
            long steps;
        };
        std::vector<Row> rows;

        auto run_one = [&](const RamanParams& params) -> Row {
            const double rabi = params.g * params.omega_l > 0.0
                                    ? subspace_rabi(params, target.n_selected)
                                    : 0.0;
            const double tau = rabi > 0.0 ? pi_time(params, target) : 0.0;
            const JointState full0 = joint_from_field(field, AtomLevel::g, 3);
            const PropagationResult full =
                numeric_propagate_full(full0, params, target, tau);
            const JointState eff0 = joint_from_field(field, AtomLevel::g, 2);
            const PropagationResult eff = analytic_propagate(eff0, params, target, tau);
            const double p_full = excited_probability(full.state);
            const double p_eff = excited_probability(eff.state);
            const int dim = space.dim;
            const double h_pop =
                full.state.amps.segment(2 * dim, dim).squaredNorm();
            const double ratio = params.g > 0.0
                                     ? params.delta / params.g
                                     : std::numeric_limits<double>::infinity();
            return Row{ratio, p_full, p_eff, std::abs(p_full - p_eff), h_pop,
                       full.norm_drift, full.steps};
        };

        const double g_ang = hz_to_angular(config.g_hz);
        const double omega_l_ang = hz_to_angular(config.omega_l_hz);
        if (g_ang > 0.0) {
            std::vector<double> ratios = config.delta_over_g_sweep;
            std::sort(ratios.begin(), ratios.end());
            const double config_ratio = config.delta_hz / config.g_hz;
            bool config_in_sweep = false;
            for (double r : ratios)
                if (std::abs(r - config_ratio) < 1e-9) config_in_sweep = true;
            if (!config_in_sweep)
                rows.push_back(run_one(config.params()));
            for (double ratio : ratios)
                rows.push_back(
                    run_one(RamanParams::from_angular(g_ang, omega_l_ang, ratio * g_ang)));
        } else {
            rows.push_back(run_one(config.params()));
        }

        const auto dir = ensure_dir(out_dir);
        auto csv = open_out(dir, "effective_comparison.csv");
        csv << "delta_over_g,p_e_full,p_e_effective,abs_diff,h_population,steps,norm_drift\n";
        for (const Row& row : rows)
            csv << fmt(row.ratio) << ',' << fmt(row.p_full) << ',' << fmt(row.p_eff) << ','
                << fmt(row.diff) << ',' << fmt(row.h_pop) << ',' << row.steps << ','
                << fmt(row.drift) << '\n';

        bool monotone = true;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].ratio > rows[i - 1].ratio && rows[i].diff > rows[i - 1].diff)
                monotone = false;

        auto txt = open_out(dir, "validate_effective.txt");
        txt << "command = validate-effective\n"
            << "n_selected = " << config.n_selected << "\n"
            << "dim = " << space.dim << "\n"
            << "rows = " << rows.size() << "\n"
            << "abs_diff_monotone_decreasing = " << (monotone ? "true" : "false") << "\n";
        if (!rows.empty())
            txt << "abs_diff_first = " << fmt(rows.front().diff) << "\n"
                << "abs_diff_last = " << fmt(rows.back().diff) << "\n";
    });
}

int cmd_photon_stats(const RunConfig& config, const std::filesystem::path& out_dir) {
    return guard([&] {
        const RamanParams params = config.params();
        warn_if_marginal(params);
        const double a2 = config.initial.is_fock ? 0.0 : std::norm(config.initial.alpha);
        int n_max = config.n_max;
        if (n_max < 0) n_max = initial_support_top(config.initial) + (config.initial.is_fock ? 6 : 0);
        const TruncatedFockSpace space(resolve_dim(config, default_dim(a2, n_max)));
        const FieldState field = config.make_initial(space);

        const Eigen::VectorXd estimates =
            measure_photon_statistics(field, params, n_max, config.mode());
        const Eigen::VectorXd truth = photon_distribution(field);

        const auto dir = ensure_dir(out_dir);
        auto csv = open_out(dir, "photon_stats.csv");
        csv << "n,p_e,p_true,abs_error\n";
        double linf = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            const double err = std::abs(estimates[n] - truth[n]);
            linf = std::max(linf, err);
            csv << n << ',' << fmt(estimates[n]) << ',' << fmt(truth[n]) << ',' << fmt(err)
                << '\n';
        }

        auto txt = open_out(dir, "photon_stats.txt");
        txt << "command = photon-stats\n"
            << "n_max = " << n_max << "\n"
            << "dim = " << space.dim << "\n"
            << "linf_error = " << fmt(linf) << "\n"
            << "mode = " << (config.monte_carlo ? "mc" : "det") << "\n";
        if (config.monte_carlo)
            txt << "atom_count = " << config.atom_count << "\n"
                << "seed = " << config.seed << "\n";
    });
}

int run_main(int argc, const char* const* argv) {
    CLI::App app{"Selective atom-field interaction simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--preset", preset, "built-in configuration (fig2 or fig3)")
            ->check(CLI::IsMember({"fig2", "fig3"}));
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "sampling seed")->each([&](const std::string&) {
            seed_given = true;
        });
        cmd->add_option("--mode", mode, "det or mc")->check(CLI::IsMember({"det", "mc"}));
    };

    CLI::App* prepare = app.add_subcommand("prepare-fock", "conditional number-state preparation");
    CLI::App* wigner = app.add_subcommand("reconstruct-wigner", "parity-series phase-space scan");
    CLI::App* validate =
        app.add_subcommand("validate-effective", "three-level model against the two-level one");
    CLI::App* stats = app.add_subcommand("photon-stats", "selective readout of the number distribution");
    for (CLI::App* cmd : {prepare, wigner, validate, stats}) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kConfigError;
    }

    RunConfig config;
    try {
        if (!preset.empty() && !config_path.empty())
            throw std::invalid_argument("give either --preset or --config, not both");
        if (!preset.empty())
            config = preset == "fig2" ? preset_fig2() : preset_fig3();
        else if (!config_path.empty())
            config = load_config_file(config_path);
        else
            throw std::invalid_argument("a --preset or --config is required");
        if (!mode.empty()) config.monte_carlo = mode == "mc";
        if (seed_given) config.seed = seed;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kConfigError;
    }

    const std::filesystem::path out(out_dir);
    if (prepare->parsed()) return cmd_prepare_fock(config, out);
    if (wigner->parsed()) return cmd_reconstruct_wigner(config, out);
    if (validate->parsed()) return cmd_validate_effective(config, out);
    return cmd_photon_stats(config, out);
}

}  // namespace selqed::cli
