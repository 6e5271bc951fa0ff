#include "pdmp/cli/report_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pdmp::cli {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string join_doubles(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ",";
        out += format_double(xs[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

void write_metadata_comments(std::ostream& os, const Metadata& meta) {
    for (const auto& [key, value] : meta) os << "# " << key << " = " << value << "\n";
}

json metadata_to_json(const Metadata& meta) {
    json out = json::object();
    for (const auto& [key, value] : meta) out[key] = value;
    return out;
}

json acceptance_to_json(const mc::AcceptanceReport& r) {
    return json{{"model", r.model},
                {"strategy", r.strategy},
                {"n_chan", r.n_chan},
                {"epsilon", r.epsilon},
                {"trials", r.trials},
                {"trials_with_proposals", r.trials_with_proposals},
                {"mean_acceptance", r.mean_acceptance},
                {"std_error", r.std_error},
                {"mean_tau", r.mean_tau},
                {"tau_std_error", r.tau_std_error},
                {"mean_proposed", r.mean_proposed},
                {"mean_accepted", r.mean_accepted},
                {"max_interjump", r.max_interjump}};
}

mc::AcceptanceReport acceptance_from_json(const json& j) {
    mc::AcceptanceReport r;
    r.model = j.at("model").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    r.n_chan = j.at("n_chan").get<int>();
    r.epsilon = j.at("epsilon").get<double>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.trials_with_proposals = j.at("trials_with_proposals").get<std::uint64_t>();
    r.mean_acceptance = j.at("mean_acceptance").get<double>();
    r.std_error = j.at("std_error").get<double>();
    r.mean_tau = j.at("mean_tau").get<double>();
    r.tau_std_error = j.at("tau_std_error").get<double>();
    r.mean_proposed = j.at("mean_proposed").get<double>();
    r.mean_accepted = j.at("mean_accepted").get<double>();
    r.max_interjump = j.at("max_interjump").get<double>();
    return r;
}

json spiking_to_json(const mc::SpikingReport& r) {
    return json{{"model", r.model},
                {"n_chan", r.n_chan},
                {"trials", r.trials},
                {"spikes", r.spikes},
                {"spike_fraction", r.spike_fraction},
                {"mean_spike_time", r.mean_spike_time},
                {"std_spike_time", r.std_spike_time},
                {"mean_std_error", r.mean_std_error},
                {"threshold", r.threshold},
                {"horizon", r.horizon}};
}

mc::SpikingReport spiking_from_json(const json& j) {
    mc::SpikingReport r;
    r.model = j.at("model").get<std::string>();
    r.n_chan = j.at("n_chan").get<int>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.spikes = j.at("spikes").get<std::uint64_t>();
    r.spike_fraction = j.at("spike_fraction").get<double>();
    r.mean_spike_time = j.at("mean_spike_time").get<double>();
    r.std_spike_time = j.at("std_spike_time").get<double>();
    r.mean_std_error = j.at("mean_std_error").get<double>();
    r.threshold = j.at("threshold").get<double>();
    r.horizon = j.at("horizon").get<double>();
    return r;
}

void write_json_document(std::ostream& os, const Metadata& meta, json rows) {
    const json doc{{"metadata", metadata_to_json(meta)}, {"rows", std::move(rows)}};
    os << doc.dump(2) << "\n";
}

} // namespace

Metadata config_metadata(const RunConfig& cfg) {
    Metadata meta;
    meta.emplace_back("artifact", std::string(kArtifactName) + " " + kArtifactVersion);
    meta.emplace_back("command", to_string(cfg.command));
    meta.emplace_back("model", to_string(cfg.model));
    meta.emplace_back("n_chan", std::to_string(cfg.n_chan));
    meta.emplace_back("n_chan_list", join_ints(cfg.n_chan_list));
    meta.emplace_back("bound", to_string(cfg.bound));
    meta.emplace_back("epsilon", format_double(cfg.epsilon));
    meta.emplace_back("epsilons", join_doubles(cfg.epsilons));
    meta.emplace_back("horizon", format_double(cfg.horizon));
    meta.emplace_back("pulse", join_doubles({cfg.pulse.amplitude, cfg.pulse.t_on, cfg.pulse.t_off}));
    meta.emplace_back("threshold", format_double(cfg.threshold));
    meta.emplace_back("trials", std::to_string(cfg.trials));
    meta.emplace_back("seed", std::to_string(cfg.seed));
    meta.emplace_back("format", to_string(cfg.format));
    return meta;
}

void write_acceptance(std::ostream& os, OutputFormat format, const Metadata& meta,
                      const std::vector<mc::AcceptanceReport>& reports) {
    if (format == OutputFormat::Json) {
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(acceptance_to_json(r));
        write_json_document(os, meta, std::move(rows));
        return;
    }
    write_metadata_comments(os, meta);
    os << "model,strategy,n_chan,epsilon,trials,trials_with_proposals,mean_acceptance,"
          "std_error,mean_tau,tau_std_error,mean_proposed,mean_accepted,max_interjump\n";
    for (const auto& r : reports) {
        os << r.model << ',' << r.strategy << ',' << r.n_chan << ',' << format_double(r.epsilon)
           << ',' << r.trials << ',' << r.trials_with_proposals << ','
           << format_double(r.mean_acceptance) << ',' << format_double(r.std_error) << ','
           << format_double(r.mean_tau) << ',' << format_double(r.tau_std_error) << ','
           << format_double(r.mean_proposed) << ',' << format_double(r.mean_accepted) << ','
           << format_double(r.max_interjump) << "\n";
    }
}

void write_spiking(std::ostream& os, OutputFormat format, const Metadata& meta,
                   const std::vector<mc::SpikingReport>& reports) {
    if (format == OutputFormat::Json) {
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(spiking_to_json(r));
        write_json_document(os, meta, std::move(rows));
        return;
    }
    write_metadata_comments(os, meta);
    os << "model,n_chan,trials,spikes,spike_fraction,mean_spike_time,std_spike_time,"
          "mean_std_error,threshold,horizon\n";
    for (const auto& r : reports) {
        os << r.model << ',' << r.n_chan << ',' << r.trials << ',' << r.spikes << ','
           << format_double(r.spike_fraction) << ',' << format_double(r.mean_spike_time) << ','
           << format_double(r.std_spike_time) << ',' << format_double(r.mean_std_error) << ','
           << format_double(r.threshold) << ',' << format_double(r.horizon) << "\n";
    }
}

void write_table(std::ostream& os, OutputFormat format, const Metadata& meta, const Table& table) {
    if (format == OutputFormat::Json) {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = row[i];
            rows.push_back(std::move(obj));
        }
        write_json_document(os, meta, std::move(rows));
        return;
    }
    write_metadata_comments(os, meta);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i > 0 ? "," : "") << table.columns[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i > 0 ? "," : "") << format_double(row[i]);
        }
        os << "\n";
    }
}

void write_validation(std::ostream& os, OutputFormat format, const Metadata& meta,
                      const std::vector<ValidationRow>& rows) {
    if (format == OutputFormat::Json) {
        json out = json::array();
        for (const auto& r : rows) {
            json obj{{"check", r.name},
                     {"observed", r.observed},
                     {"reference", r.reference},
                     {"pass", r.pass}};
            if (std::isnan(r.p_value)) {
                obj["p_value"] = nullptr;
            } else {
                obj["p_value"] = r.p_value;
            }
            out.push_back(std::move(obj));
        }
        write_json_document(os, meta, std::move(out));
        return;
    }
    write_metadata_comments(os, meta);
    os << "check,observed,reference,p_value,pass\n";
    for (const auto& r : rows) {
        os << r.name << ',' << format_double(r.observed) << ',' << format_double(r.reference)
           << ',' << (std::isnan(r.p_value) ? "" : format_double(r.p_value)) << ','
           << (r.pass ? 1 : 0) << "\n";
    }
}

std::vector<mc::AcceptanceReport> parse_acceptance_json(std::istream& is) {
    const json doc = json::parse(is);
    std::vector<mc::AcceptanceReport> out;
    for (const auto& row : doc.at("rows")) out.push_back(acceptance_from_json(row));
    return out;
}

std::vector<mc::SpikingReport> parse_spiking_json(std::istream& is) {
    const json doc = json::parse(is);
    std::vector<mc::SpikingReport> out;
    for (const auto& row : doc.at("rows")) out.push_back(spiking_from_json(row));
    return out;
}

} // namespace pdmp::cli
