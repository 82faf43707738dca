#ifndef PWSHARP_CLI_CLI_HPP
#define PWSHARP_CLI_CLI_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pwsharp::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;  // selftest found a failing property
inline constexpr int exit_error = 2;   // library error, reported as a JSON error object
inline constexpr int exit_usage = 64;

enum class Command { Constant, Table, Extremizer, Oracle, Asymptotics, Poincare, Ep2, Selftest };
enum class OutputFormat { Auto, Json, Csv };  // Auto: CSV for table and extremizer, else JSON

struct RunConfig {
    Command command = Command::Constant;
    double beta = -0.5;
    int k = 1;
    double delta = 1.0;
    int N = 400;
    std::optional<double> scan_step;
    double tol = 1e-11;
    OutputFormat output_format = OutputFormat::Auto;
    std::filesystem::path cache_path;
    bool use_cache = true;

    // table
    std::string table_kind = "beta_half";
    std::optional<int> range_from;
    std::optional<int> range_to;
    // extremizer sampling
    double x_min = 0.0;
    double x_max = 10.0;
    int samples = 201;
    // oracle
    std::string oracle_kind = "galerkin";
    int fd_m = 1;
    int fd_grid = 200;
    double radius = 1.0;
    // poincare
    int m = 1;
    int n = 0;
    std::optional<int> d;
    int m1 = 0;
    int n1 = 0;
    // asymptotics
    std::vector<double> betas{-0.9, -0.5, 0.0, 1.0, 2.5, 5.0};
    int k_max = 8;

    /// Throws pwsharp::Error(DomainError) for values outside the documented ranges.
    void validate() const;
};

/// Runs one command line (without the program name); returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwsharp::cli

#endif
