#pragma once

#include <filesystem>
#include <string>

#include "selqed/protocols.hpp"

namespace selqed::cli {

enum ExitCode {
    kOk = 0,
    kConfigError = 1,
    kInfeasible = 2,
    kTruncation = 3,
    kNoConvergence = 4,
};

struct GridSpec {
    double re_min = -3.5, re_max = 3.5;
    double im_min = -3.5, im_max = 3.5;
    double step = 0.1;
};

struct InitialState {
    bool is_fock = false;
    int fock_n = 0;
    Complex alpha{};
};

/// Everything a run needs. Frequencies are ordinary (Hz); the angular conversion
/// happens once, when the physics parameters are built.
struct RunConfig {
    double g_hz = 0.0;
    double omega_l_hz = 0.0;
    double delta_hz = 0.0;
    int n_selected = 0;
    InitialState initial;
    int dim_override = 0;  // 0: pick from the truncation rule
    int atoms = 1;
    int n_max = -1;  // < 0: pick from the initial state's support
    GridSpec grid;
    int series_cutoff = -1;
    std::vector<double> delta_over_g_sweep{20.0, 40.0, 80.0};
    bool monte_carlo = false;
    std::uint64_t seed = 1;
    long atom_count = 10000;

    RamanParams params() const;
    FieldState make_initial(const TruncatedFockSpace& space) const;
    MeasurementMode mode() const;
};

RunConfig parse_config_json(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);
RunConfig preset_fig2();
RunConfig preset_fig3();

/// "fock:N" or "coherent:RE,IM".
InitialState parse_initial(const std::string& text);

/// Fixed-width decimal emission used by every output file: 12 significant digits,
/// locale-free, so identical runs produce identical bytes.
std::string fmt(double value);

int cmd_prepare_fock(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_reconstruct_wigner(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_validate_effective(const RunConfig& config, const std::filesystem::path& out_dir);
int cmd_photon_stats(const RunConfig& config, const std::filesystem::path& out_dir);

int run_main(int argc, const char* const* argv);

}  // namespace selqed::cli
