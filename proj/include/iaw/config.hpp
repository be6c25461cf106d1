#ifndef IAW_CONFIG_HPP
#define IAW_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iaw {

/// Thrown for malformed or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat INI-style configuration:
//
//   [grid]
//   length = 40pi          # box length; plain number or multiple of pi
//   n = 512
//   [kdv]
//   init = soliton         # soliton | file
//   soliton_k = 0.5
//   init_file =            # one sample per line when init = file
//   [time]
//   T = 1.0
//   dt = 0.001
//   snapshot_stride = 2
//   [sweep]
//   epsilons = 0.1, 0.05, 0.025, 0.0125
//   nu_rule = beta         # beta | list
//   betas = 0.5, 1.0, 1.5
//   nus =                  # explicit list when nu_rule = list
//   [transport]
//   coeffs = constant      # constant | sqrt_theta
//   [regime]
//   c0 = 0.25
//   c1 = 0.01
//   [output]
//   dir = out
//   antideriv_mean_tol = 1e-8
struct RunConfig {
    double length = 40.0 * 3.14159265358979323846;
    int n = 512;

    std::string kdv_init = "soliton";
    double soliton_k = 0.5;
    std::string init_file;

    double T = 1.0;
    double dt = 1e-3;
    int snapshot_stride = 2;

    std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
    std::string nu_rule = "beta";
    std::vector<double> betas{0.5, 1.0, 1.5};
    std::vector<double> nus;

    std::string transport = "constant";

    double c0 = 0.25;
    double c1 = 0.01;

    std::string out_dir = "out";
    double antideriv_mean_tol = 1e-8;

    void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Sorted key=value rendering; the digest and the manifest echo use this.
std::string canonical_config(const RunConfig& cfg);

/// FNV-1a 64-bit digest of the canonical text.
uint64_t config_digest(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace iaw

#endif
