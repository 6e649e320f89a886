#include "fgrover/runner.hpp"

#include "fgrover/analysis.hpp"
#include "fgrover/errors.hpp"
#include "fgrover/grover.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <thread>

#ifndef FGROVER_VERSION
#define FGROVER_VERSION "0.0.0"
#endif

namespace fgrover {

const char* const artifact_version = FGROVER_VERSION;

namespace {

using json = nlohmann::json;

double round9(double v)
{
    if (!std::isfinite(v))
        return v;
    return std::strtod(format_number(v).c_str(), nullptr);
}

json number_or_null(double v)
{
    return std::isfinite(v) ? json(round9(v)) : json(nullptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<const char*> header)
    {
        bool first = true;
        for (const char* h : header) {
            if (!first)
                out_ += ',';
            out_ += h;
            first = false;
        }
        out_ += '\n';
    }

    void row(std::initializer_list<double> values)
    {
        bool first = true;
        for (double v : values) {
            if (!first)
                out_ += ',';
            out_ += format_number(v);
            first = false;
        }
        out_ += '\n';
    }

    std::string str() && { return std::move(out_); }

private:
    std::string out_;
};

/// Bookkeeping shared by every cavity-flavoured summary.
void add_geometry(json& s, const ExperimentConfig& cfg)
{
    const auto& c = cfg.cavity;
    const double resolution = cfg.analysis.resolution.value_or(
        rayleigh_resolution(c.wavelength, cfg.analysis.numerical_aperture));
    s["expected_nm"] = round9(expected_nm(c.input_fwhm, c.oracle_plate.flat_width));
    s["rayleigh_resolution_m"] = round9(rayleigh_resolution(c.wavelength, cfg.analysis.numerical_aperture));
    s["max_database_size"] = round9(max_database_size(c.input_fwhm, resolution, cfg.analysis.dims));
    s["equivalent_qubits"] = round9(equivalent_qubits(c.input_fwhm, resolution, cfg.analysis.dims));
}

double estimate_phase(const ExperimentConfig& cfg)
{
    return cfg.analysis.ideal_phase_estimate ? std::numbers::pi / 2.0 : std::abs(cfg.cavity.oracle_plate.phase_depth);
}

json base_summary(const ExperimentConfig& cfg)
{
    json s = json::object();
    s["artifact_version"] = artifact_version;
    s["mode"] = to_string(cfg.mode);
    s["config"] = config_echo(cfg);
    return s;
}

RunOutput run_search_mode(const ExperimentConfig& cfg)
{
    const auto trace = run_search(cfg.effective_cavity());

    CsvWriter profiles({"iteration_count", "x_m", "intensity", "compensated_intensity"});
    CsvWriter peaks({"iteration_count", "peak_position_m", "peak_value"});
    json edge = json::array();
    for (const auto& p : trace.pulses) {
        for (std::size_t i = 0; i < p.intensity.size(); ++i)
            profiles.row({p.iteration_count, trace.reported_coordinate(i), p.intensity[i], p.compensated_intensity[i]});
        peaks.row({p.iteration_count, p.peak_position, p.peak_value});
        if (p.peak_at_edge)
            edge.push_back(round9(p.iteration_count));
    }

    json s = base_summary(cfg);
    s["pulses"] = trace.pulses.size();
    s["peak_at_edge_iterations"] = edge;
    const double phi = estimate_phase(cfg);
    s["estimate_phase_per_pass_rad"] = round9(phi);
    const double k = first_maximum(PeakTrace::from_search(trace));
    s["first_maximum"] = round9(k);
    s["estimate_nm"] = phi > 0.0 ? number_or_null(estimate_nm(k, phi)) : json(nullptr);
    add_geometry(s, cfg);

    RunOutput out;
    out.summary = s;
    out.files.push_back({"profiles.csv", std::move(profiles).str()});
    out.files.push_back({"peaks.csv", std::move(peaks).str()});
    return out;
}

RunOutput run_pulse_train_mode(const ExperimentConfig& cfg)
{
    const auto cavity = cfg.effective_cavity();
    const auto trace = run_search(cavity);
    const auto train = pulse_train(trace, cavity.slit);

    CsvWriter table({"iteration_count", "slit_energy", "total_energy"});
    json ratios = json::array();
    for (std::size_t j = 0; j < train.size(); ++j) {
        table.row({train[j].first, train[j].second, trace.pulses[j].total_energy});
        if (j > 0)
            ratios.push_back(train[j - 1].second > 0.0 ? number_or_null(train[j].second / train[j - 1].second)
                                                        : json(nullptr));
    }

    json s = base_summary(cfg);
    s["pulses"] = train.size();
    s["consecutive_energy_ratios"] = ratios;
    s["slit_energy_first"] = round9(train.front().second);
    double best = train.front().second;
    double best_k = train.front().first;
    for (const auto& [k, e] : train)
        if (e > best) {
            best = e;
            best_k = k;
        }
    s["slit_energy_max"] = round9(best);
    s["slit_energy_max_iteration"] = round9(best_k);
    add_geometry(s, cfg);

    RunOutput out;
    out.summary = s;
    out.files.push_back({"pulse_train.csv", std::move(table).str()});
    return out;
}

RunOutput run_reference_mode(const ExperimentConfig& cfg)
{
    const auto& r = cfg.reference;
    const double phi_pass = std::abs(r.phase_oracle) / 2.0;
    const bool phase_ok = phi_pass > 0.0 && phi_pass <= std::numbers::pi / 2.0;
    const double opt = phase_ok ? optimal_iterations(r.N, r.m, phi_pass) : std::nan("");
    const int k_scan = static_cast<int>(std::ceil(3.0 * (phase_ok ? opt : oscillation_period(r.N, r.m))));
    const int k_max = std::max(r.iterations, k_scan);

    const bool full_ok = r.N == std::floor(r.N) && r.m == std::floor(r.m) && r.N <= 65536.0;
    const bool ideal = r.phase_oracle == std::numbers::pi && r.phase_diffusion == std::numbers::pi;

    auto reduced = GroverReducedState::uniform(r.N, r.m);
    std::optional<FullGroverState> full;
    if (full_ok) {
        std::vector<std::size_t> marked(static_cast<std::size_t>(r.m));
        for (std::size_t i = 0; i < marked.size(); ++i)
            marked[i] = i;
        full = FullGroverState::uniform(static_cast<std::size_t>(r.N), std::move(marked));
    }

    CsvWriter table({"k", "closed_form_ideal", "reduced", "full"});
    double at_k_reduced = 0.0, at_k_full = std::nan(""), best = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
            reduced = reduced_iterate(reduced, r.phase_oracle, r.phase_diffusion);
            if (full)
                *full = full_iterate(*full, r.phase_oracle, r.phase_diffusion);
        }
        const double p_red = reduced.success_probability();
        const double p_full = full ? full->success_probability() : std::nan("");
        table.row({static_cast<double>(k), success_probability(k, r.N, r.m), p_red, p_full});
        if (k == r.iterations) {
            at_k_reduced = p_red;
            at_k_full = p_full;
        }
        if (k <= k_scan)
            best = std::max(best, p_red);
    }

    json s = base_summary(cfg);
    s["iterations"] = r.iterations;
    // Closed form holds for ideal phases; otherwise report the reduced model.
    s["success_probability"] = round9(ideal ? success_probability(r.iterations, r.N, r.m) : at_k_reduced);
    s["reduced_success_probability"] = round9(at_k_reduced);
    s["full_success_probability"] = number_or_null(at_k_full);
    s["max_success_probability"] = round9(best);
    s["max_scan_iterations"] = k_scan;
    s["optimal_iterations"] = number_or_null(opt);
    s["oscillation_period"] = round9(oscillation_period(r.N, r.m));

    RunOutput out;
    out.summary = s;
    out.files.push_back({"reference.csv", std::move(table).str()});
    return out;
}

RunOutput run_analyze_mode(const ExperimentConfig& cfg)
{
    const auto& c = cfg.cavity;
    json s = base_summary(cfg);
    add_geometry(s, cfg);
    const double nm = expected_nm(c.input_fwhm, c.oracle_plate.flat_width);
    const double phi = std::abs(c.oracle_plate.phase_depth);
    s["optimal_iterations"] =
        phi > 0.0 && phi <= std::numbers::pi / 2.0 ? number_or_null(optimal_iterations(nm, 1.0, phi)) : json(nullptr);
    s["oscillation_period"] = round9(oscillation_period(nm, 1.0));
    s["fourier_plane_pitch_m"] = round9(c.fourier_grid().pitch());
    s["focal_spot_fwhm_m"] =
        round9(2.0 * std::log(2.0) / std::numbers::pi * c.wavelength * c.focal_length_1 / c.input_fwhm);
    RunOutput out;
    out.summary = s;
    return out;
}

json set_path(json doc, const std::string& path, const json& value)
{
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty())
            throw ConfigError(fmt::format("sweep parameter '{}' is not a valid dotted path", path));
        if (!node->is_object())
            throw ConfigError(fmt::format("sweep parameter '{}' does not address an object member", path));
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return doc;
        }
        node = &(*node)[key];
        if (node->is_null())
            *node = json::object();
        start = dot + 1;
    }
}

std::string csv_cell(const json& v)
{
    if (v.is_number())
        return format_number(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_null())
        return "";
    return v.dump();
}

} // namespace

std::string format_number(double value)
{
    return fmt::format("{:.9g}", value);
}

RunOutput run_experiment(const ExperimentConfig& config)
{
    RunOutput out;
    switch (config.mode) {
    case RunMode::search:
        out = run_search_mode(config);
        break;
    case RunMode::pulse_train:
        out = run_pulse_train_mode(config);
        break;
    case RunMode::reference:
        out = run_reference_mode(config);
        break;
    case RunMode::analyze:
        out = run_analyze_mode(config);
        break;
    }
    out.files.push_back({"summary.json", out.summary.dump(2) + "\n"});
    return out;
}

RunOutput run_sweep(const ExperimentConfig& config, int workers)
{
    if (config.sweep.empty())
        return run_experiment(config);
    if (workers < 1)
        throw ConfigError(fmt::format("workers = {} must be at least 1", workers));

    json base = config.source;
    base.erase("sweep");

    // Enumerate points, first axis slowest.
    std::vector<std::vector<std::size_t>> points{{}};
    for (const auto& axis : config.sweep) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& p : points)
            for (std::size_t v = 0; v < axis.values.size(); ++v) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }

    std::vector<ExperimentConfig> configs;
    configs.reserve(points.size());
    for (const auto& p : points) {
        json doc = base;
        for (std::size_t a = 0; a < p.size(); ++a)
            doc = set_path(std::move(doc), config.sweep[a].parameter, config.sweep[a].values[p[a]]);
        configs.push_back(expand_config(doc));
    }

    std::vector<json> summaries(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                summaries[i] = run_experiment(configs[i]).summary;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), points.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n_threads; ++t)
        threads.emplace_back(worker);
    worker();
    for (auto& t : threads)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::set<std::string> scalar_keys;
    for (const auto& s : summaries)
        for (const auto& [key, value] : s.items())
            if ((value.is_number() || value.is_null()) && key != "config")
                scalar_keys.insert(key);

    std::string csv;
    for (const auto& axis : config.sweep)
        csv += axis.parameter + ",";
    for (const auto& k : scalar_keys)
        csv += k + ",";
    csv.back() = '\n';

    json axes = json::array();
    for (const auto& axis : config.sweep)
        axes.push_back({{"parameter", axis.parameter}, {"values", axis.values}});
    json records = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        json point = json::object();
        for (std::size_t a = 0; a < points[i].size(); ++a) {
            const auto& v = config.sweep[a].values[points[i][a]];
            point[config.sweep[a].parameter] = v;
            csv += csv_cell(v) + ",";
        }
        for (const auto& k : scalar_keys)
            csv += (summaries[i].contains(k) ? csv_cell(summaries[i][k]) : std::string()) + ",";
        csv.back() = '\n';
        json rec = summaries[i];
        rec["sweep_point"] = point;
        records.push_back(std::move(rec));
    }

    RunOutput out;
    out.summary = {{"artifact_version", artifact_version}, {"axes", axes}, {"points", records}};
    out.files.push_back({"sweep.csv", std::move(csv)});
    out.files.push_back({"summary.json", out.summary.dump(2) + "\n"});
    return out;
}

void write_outputs(const RunOutput& output, const std::filesystem::path& directory)
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec)
        throw IoError(fmt::format("cannot create output directory '{}': {}", directory.string(), ec.message()));
    for (const auto& f : output.files) {
        const auto path = directory / f.name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
        out.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
        if (!out)
            throw IoError(fmt::format("error writing '{}'", path.string()));
    }
}

} // namespace fgrover
