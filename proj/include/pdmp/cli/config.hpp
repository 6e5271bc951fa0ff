#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdmp/envelope.hpp"
#include "pdmp/flow.hpp"

namespace pdmp::cli {

enum class Command { Simulate, CompareBounds, SweepEpsilon, SpikingTimes, Validate };
enum class ModelKind { Subunit, Channel, PoissonTest, ConstantTest };
enum class OutputFormat { Csv, Json };

/// Effective run configuration: defaults, overridden by a config file,
/// overridden by flags. Everything here is echoed into the output metadata.
struct RunConfig {
    Command command = Command::Simulate;
    ModelKind model = ModelKind::Subunit;
    int n_chan = 30;
    std::vector<int> n_chan_list = {30, 100, 300, 1000, 3000}; // spiking sweep
    BoundKind bound = BoundKind::OptimalQAdaptive;
    double epsilon = 0.1;
    std::vector<double> epsilons = {0.5, 0.1, 0.05, 0.02, 0.01, 0.005}; // epsilon sweep
    double horizon = 10.0;                                              // ms
    PulseCurrent pulse{30.0, 1.0, 2.0};
    double threshold = 60.0; // mV
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = hardware concurrency
    std::string out_path; // empty = stdout
    OutputFormat format = OutputFormat::Csv;

    BoundStrategy strategy() const {
        switch (bound) {
            case BoundKind::Global: return BoundStrategy::global();
            case BoundKind::Local: return BoundStrategy::local();
            case BoundKind::OptimalP: return BoundStrategy::optimal_p(epsilon);
            case BoundKind::OptimalQ: return BoundStrategy::optimal_q(epsilon);
            case BoundKind::OptimalQAdaptive: return BoundStrategy::optimal_q_adaptive();
        }
        return BoundStrategy::global();
    }
};

std::string to_string(Command c);
std::string to_string(ModelKind m);
std::string to_string(OutputFormat f);
std::string to_string(BoundKind b);

struct ParseOutcome {
    enum class Status { Run, Exit, Error } status = Status::Run;
    int exit_code = 0;
};

/// Parse argv (plus an optional --config file) into cfg. Malformed or
/// unknown keys are usage errors; --help prints and asks for a clean exit.
ParseOutcome parse_config(int argc, const char* const* argv, RunConfig& cfg);

} // namespace pdmp::cli
