#include "pdmp/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace pdmp::cli {

std::string to_string(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::CompareBounds: return "compare-bounds";
        case Command::SweepEpsilon: return "sweep-epsilon";
        case Command::SpikingTimes: return "spiking-times";
        case Command::Validate: return "validate";
    }
    return "?";
}

std::string to_string(ModelKind m) {
    switch (m) {
        case ModelKind::Subunit: return "subunit";
        case ModelKind::Channel: return "channel";
        case ModelKind::PoissonTest: return "poisson-test";
        case ModelKind::ConstantTest: return "constant-test";
    }
    return "?";
}

std::string to_string(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "json";
}

std::string to_string(BoundKind b) {
    switch (b) {
        case BoundKind::Global: return "global";
        case BoundKind::Local: return "local";
        case BoundKind::OptimalP: return "optimal-p";
        case BoundKind::OptimalQ: return "optimal-q";
        case BoundKind::OptimalQAdaptive: return "optimal-q-adaptive";
    }
    return "?";
}

namespace {

const std::map<std::string, ModelKind> kModelNames = {
    {"subunit", ModelKind::Subunit},
    {"channel", ModelKind::Channel},
    {"poisson-test", ModelKind::PoissonTest},
    {"constant-test", ModelKind::ConstantTest},
};

const std::map<std::string, BoundKind> kBoundNames = {
    {"global", BoundKind::Global},
    {"local", BoundKind::Local},
    {"optimal-p", BoundKind::OptimalP},
    {"optimal-q", BoundKind::OptimalQ},
    {"optimal-q-adaptive", BoundKind::OptimalQAdaptive},
};

const std::map<std::string, OutputFormat> kFormatNames = {
    {"csv", OutputFormat::Csv},
    {"json", OutputFormat::Json},
};

struct PendingValues {
    std::vector<double> pulse;
};

void add_common_options(CLI::App& sub, RunConfig& cfg, PendingValues& pending) {
    sub.add_option("--model", cfg.model, "model to simulate")
        ->transform(CLI::CheckedTransformer(kModelNames, CLI::ignore_case));
    sub.add_option("--n-chan", cfg.n_chan, "number of sodium and potassium channels")
        ->check(CLI::PositiveNumber);
    sub.add_option("--bound", cfg.bound, "jump rate bound strategy")
        ->transform(CLI::CheckedTransformer(kBoundNames, CLI::ignore_case));
    sub.add_option("--epsilon", cfg.epsilon, "partition width for optimal-p / optimal-q (ms)")
        ->check(CLI::PositiveNumber);
    sub.add_option("--horizon", cfg.horizon, "simulation horizon (ms)")
        ->check(CLI::PositiveNumber);
    sub.add_option("--pulse", pending.pulse, "stimulation pulse K,t1,t2")
        ->delimiter(',')
        ->expected(1, 3);
    sub.add_option("--threshold", cfg.threshold, "spike threshold (mV)");
    sub.add_option("--trials", cfg.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub.add_option("--seed", cfg.seed, "master seed (streams derive from trial indices)")
        ->envname("PDMP_SEED");
    sub.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    sub.add_option("--out", cfg.out_path, "output file (default stdout)");
    sub.add_option("--format", cfg.format, "output format")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
}

} // namespace

ParseOutcome parse_config(int argc, const char* const* argv, RunConfig& cfg) {
    CLI::App app{"Exact PDMP simulation by thinning: experiments and validation"};
    app.set_config("--config", "", "configuration file (flags win over file values)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    PendingValues pending;
    struct SubSpec {
        Command command;
        const char* name;
        const char* desc;
    };
    const SubSpec specs[] = {
        {Command::Simulate, "simulate", "dump one trajectory (t, V, mode columns)"},
        {Command::CompareBounds, "compare-bounds", "acceptance rate per bound strategy"},
        {Command::SweepEpsilon, "sweep-epsilon", "acceptance rate as a function of epsilon"},
        {Command::SpikingTimes, "spiking-times", "spike-time statistics per channel count"},
        {Command::Validate, "validate", "statistical oracle suite (exit 3 on failure)"},
    };
    std::map<const CLI::App*, Command> command_of;
    for (const auto& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.desc);
        sub->configurable();
        add_common_options(*sub, cfg, pending);
        if (spec.command == Command::SweepEpsilon) {
            sub->add_option("--epsilons", cfg.epsilons, "partition widths to sweep")
                ->delimiter(',');
        }
        if (spec.command == Command::SpikingTimes) {
            sub->add_option("--n-chan-list", cfg.n_chan_list, "channel counts to sweep")
                ->delimiter(',');
        }
        command_of[sub] = spec.command;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return {ParseOutcome::Status::Exit, 0};
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return {ParseOutcome::Status::Error, 1};
    }

    cfg.command = command_of.at(app.get_subcommands().front());
    if (!pending.pulse.empty()) {
        if (pending.pulse.size() != 3) {
            std::cerr << "usage error: --pulse expects K,t1,t2\n";
            return {ParseOutcome::Status::Error, 1};
        }
        cfg.pulse = {pending.pulse[0], pending.pulse[1], pending.pulse[2]};
    }
    if (cfg.pulse.amplitude < 0.0 || cfg.pulse.t_off < cfg.pulse.t_on) {
        std::cerr << "usage error: pulse needs K >= 0 and t1 <= t2\n";
        return {ParseOutcome::Status::Error, 1};
    }
    for (const double eps : cfg.epsilons) {
        if (!(eps > 0.0)) {
            std::cerr << "usage error: epsilons must be positive\n";
            return {ParseOutcome::Status::Error, 1};
        }
    }
    for (const int n : cfg.n_chan_list) {
        if (n <= 0) {
            std::cerr << "usage error: channel counts must be positive\n";
            return {ParseOutcome::Status::Error, 1};
        }
    }
    return {ParseOutcome::Status::Run, 0};
}

} // namespace pdmp::cli
