#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablehcm/quadrature.hpp"

namespace stablehcm::cli {

enum class Command { Eval, Theta, Classify, Envelope, Verify, Sample };

struct GridSpec {
    double min = 0.01, max = 100.0;
    int count = 30;
    bool log = true;

    std::vector<double> points() const;
};

struct RunConfig {
    Command command = Command::Eval;
    std::vector<double> alphas{0.5};
    std::optional<double> gamma;
    std::string quantity = "G";  // eval: G, density or tail
    std::vector<double> xs;      // explicit points take precedence over the grid
    GridSpec grid;
    double rmin = 1e-4, rmax = 1e4;
    int theta_n = 200;
    QuadratureConfig quad;
    std::string format = "csv";
    std::string out;  // empty writes to stdout
    std::optional<std::uint64_t> seed;
    std::size_t n_samples = 10000;
    int grid_density = 200;
    std::string suite = "all";

    double alpha() const { return alphas.front(); }
};

// Thrown for malformed command lines; the message names the offending token.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseOutcome {
    std::optional<RunConfig> config;  // empty when help was printed
    std::string help;
};

ParseOutcome parse_args(const std::vector<std::string>& argv);

// Exit codes: 0 success, 1 domain or usage error, 2 numerical failure or violated check.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace stablehcm::cli
