#include "fgrover/config.hpp"

#include "fgrover/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace fgrover {

// Defined in the generated presets_data.cpp (one entry per presets/*.json).
namespace detail {
struct PresetSource {
    const char* name;
    const char* text;
};
extern const PresetSource preset_sources[];
extern const std::size_t preset_count;
} // namespace detail

namespace {

using json = nlohmann::json;

constexpr const char* default_preset = "paper-42um";

const std::map<std::string, json>& presets()
{
    static const std::map<std::string, json> table = [] {
        std::map<std::string, json> t;
        for (std::size_t i = 0; i < detail::preset_count; ++i)
            t.emplace(detail::preset_sources[i].name, json::parse(detail::preset_sources[i].text));
        return t;
    }();
    return table;
}

/// Strict reader over one JSON object. Every value read (or defaulted) is
/// mirrored into `out`, so `out` ends up as the complete expanded document.
class Section {
public:
    Section(const json& in, json& out, std::string path, std::initializer_list<const char*> allowed)
        : in_(in), out_(out), path_(std::move(path))
    {
        if (!in_.is_object())
            throw ConfigError(fmt::format("'{}' must be an object", path_.empty() ? "<root>" : path_));
        for (const auto& [key, value] : in_.items()) {
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
            if (!known)
                throw ConfigError(fmt::format("unknown key '{}'", name(key.c_str())));
        }
        if (!out_.is_object())
            out_ = json::object();
    }

    std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const char* key, double fallback)
    {
        const json* v = find(key);
        if (!v) {
            out_[key] = fallback;
            return fallback;
        }
        if (!v->is_number())
            throw ConfigError(fmt::format("'{}' must be a number", name(key)));
        out_[key] = *v;
        const double d = v->get<double>();
        if (!std::isfinite(d))
            throw ConfigError(fmt::format("'{}' must be finite", name(key)));
        return d;
    }

    long long integer(const char* key, long long fallback)
    {
        const json* v = find(key);
        if (!v) {
            out_[key] = fallback;
            return fallback;
        }
        if (v->is_number_integer()) {
            out_[key] = *v;
            return v->get<long long>();
        }
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) {
                out_[key] = static_cast<long long>(d);
                return static_cast<long long>(d);
            }
        }
        throw ConfigError(fmt::format("'{}' must be an integer", name(key)));
    }

    bool boolean(const char* key, bool fallback)
    {
        const json* v = find(key);
        if (!v) {
            out_[key] = fallback;
            return fallback;
        }
        if (!v->is_boolean())
            throw ConfigError(fmt::format("'{}' must be true or false", name(key)));
        out_[key] = *v;
        return v->get<bool>();
    }

    std::string string(const char* key, const std::string& fallback)
    {
        const json* v = find(key);
        if (!v) {
            out_[key] = fallback;
            return fallback;
        }
        if (!v->is_string())
            throw ConfigError(fmt::format("'{}' must be a string", name(key)));
        out_[key] = *v;
        return v->get<std::string>();
    }

    Section child(const char* key, std::initializer_list<const char*> allowed)
    {
        static const json empty = json::object();
        const json* v = find(key);
        return Section(v ? *v : empty, out_[key], name(key), allowed);
    }

    const json* find(const char* key) const
    {
        auto it = in_.find(key);
        if (it == in_.end() || it->is_null())
            return nullptr;
        return &*it;
    }

    void fail(const char* key, const std::string& constraint) const
    {
        throw ConfigError(fmt::format("'{}' {}", name(key), constraint));
    }

private:
    const json& in_;
    json& out_;
    std::string path_;
};

RunMode parse_mode(const std::string& s)
{
    if (s == "search")
        return RunMode::search;
    if (s == "pulse-train")
        return RunMode::pulse_train;
    if (s == "reference")
        return RunMode::reference;
    if (s == "analyze")
        return RunMode::analyze;
    throw ConfigError(fmt::format("'mode' = \"{}\" must be one of search, pulse-train, reference, analyze", s));
}

TrapezoidPhasePlate read_plate(Section plate, const TrapezoidPhasePlate& fallback)
{
    TrapezoidPhasePlate p;
    p.center = plate.number("center_um", fallback.center / 1e-6) * 1e-6;
    p.flat_width = plate.number("flat_width_um", fallback.flat_width / 1e-6) * 1e-6;
    p.ramp_width = plate.number("ramp_width_um", fallback.ramp_width / 1e-6) * 1e-6;
    p.phase_depth = plate.number("phase_rad", fallback.phase_depth);
    if (!(p.flat_width > 0.0))
        plate.fail("flat_width_um", "must be positive");
    if (!(p.ramp_width >= 0.0))
        plate.fail("ramp_width_um", "must be non-negative");
    if (!(std::abs(p.phase_depth) <= std::numbers::pi))
        plate.fail("phase_rad", "must satisfy |phase| <= pi");
    return p;
}

constexpr std::initializer_list<const char*> plate_keys = {"center_um", "flat_width_um", "ramp_width_um",
                                                           "phase_rad"};

} // namespace

std::string to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::search:
        return "search";
    case RunMode::pulse_train:
        return "pulse-train";
    case RunMode::reference:
        return "reference";
    case RunMode::analyze:
        return "analyze";
    }
    return "search";
}

CavityConfig ExperimentConfig::effective_cavity() const
{
    CavityConfig c = cavity;
    if (!plates_in_beam) {
        c.oracle_plate.phase_depth = 0.0;
        c.iaa_plate.phase_depth = 0.0;
    }
    return c;
}

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& [name, doc] : presets())
        names.push_back(name);
    return names;
}

const nlohmann::json& preset_document(const std::string& name)
{
    const auto& table = presets();
    auto it = table.find(name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [n, doc] : table)
            known += (known.empty() ? "" : ", ") + n;
        throw ConfigError(fmt::format("'preset' = \"{}\" is not one of: {}", name, known));
    }
    return it->second;
}

nlohmann::json parse_config_text(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("configuration parse error at byte {}: {}", e.byte, e.what()));
    }
}

ExperimentConfig expand_config(const nlohmann::json& document)
{
    if (!document.is_object())
        throw ConfigError("configuration document must be an object");

    ExperimentConfig cfg;
    cfg.source = document;

    json merged = document;
    if (auto it = document.find("preset"); it != document.end() && !it->is_null()) {
        if (!it->is_string())
            throw ConfigError("'preset' must be a string");
        cfg.preset = it->get<std::string>();
    }
    merged = preset_document(cfg.preset.empty() ? default_preset : cfg.preset);
    json overrides = document;
    overrides.erase("preset");
    merged.merge_patch(overrides);

    json out = json::object();
    Section root(merged, out, "",
                 {"mode", "output_dir", "wavelength_nm", "input_fwhm_um", "focal_length_1_mm", "focal_length_2_mm",
                  "roundtrip_energy_factor", "output_mirror_transmission", "grid", "oracle_plate", "iaa_plate",
                  "slit", "n_pulses", "loss_compensation", "report_magnified", "plates_in_beam", "reference",
                  "analysis", "sweep", "workers"});

    cfg.mode = parse_mode(root.string("mode", "search"));
    cfg.output_dir = root.string("output_dir", "out");
    if (cfg.output_dir.empty())
        root.fail("output_dir", "must not be empty");

    CavityConfig& c = cfg.cavity;
    const CavityConfig d;
    c.wavelength = root.number("wavelength_nm", d.wavelength / 1e-9) * 1e-9;
    if (!(c.wavelength > 0.0))
        root.fail("wavelength_nm", "must be positive");
    c.input_fwhm = root.number("input_fwhm_um", d.input_fwhm / 1e-6) * 1e-6;
    if (!(c.input_fwhm > 0.0))
        root.fail("input_fwhm_um", "must be positive");
    c.focal_length_1 = root.number("focal_length_1_mm", d.focal_length_1 / 1e-3) * 1e-3;
    if (!(c.focal_length_1 > 0.0))
        root.fail("focal_length_1_mm", "must be positive");
    c.focal_length_2 = root.number("focal_length_2_mm", d.focal_length_2 / 1e-3) * 1e-3;
    if (!(c.focal_length_2 > 0.0))
        root.fail("focal_length_2_mm", "must be positive");
    c.loss.roundtrip_energy_factor = root.number("roundtrip_energy_factor", d.loss.roundtrip_energy_factor);
    if (!(c.loss.roundtrip_energy_factor > 0.0 && c.loss.roundtrip_energy_factor <= 1.0))
        root.fail("roundtrip_energy_factor", "must lie in (0, 1]");
    c.output_mirror_transmission = root.number("output_mirror_transmission", d.output_mirror_transmission);
    if (!(c.output_mirror_transmission > 0.0 && c.output_mirror_transmission <= 1.0))
        root.fail("output_mirror_transmission", "must lie in (0, 1]");

    {
        Section grid = root.child("grid", {"n_samples", "pitch_um"});
        const long long n = grid.integer("n_samples", static_cast<long long>(d.grid.size()));
        const double pitch = grid.number("pitch_um", d.grid.pitch() / 1e-6) * 1e-6;
        if (n < 16 || !std::has_single_bit(static_cast<unsigned long long>(n)))
            grid.fail("n_samples", "must be a power of two >= 16");
        if (!(pitch > 0.0))
            grid.fail("pitch_um", "must be positive");
        c.grid = Grid1D(static_cast<std::size_t>(n), pitch);
    }
    c.oracle_plate = read_plate(root.child("oracle_plate", plate_keys), d.oracle_plate);
    c.iaa_plate = read_plate(root.child("iaa_plate", plate_keys), d.iaa_plate);
    {
        Section slit = root.child("slit", {"center_um", "width_um"});
        c.slit.center = slit.number("center_um", d.slit.center / 1e-6) * 1e-6;
        c.slit.width = slit.number("width_um", d.slit.width / 1e-6) * 1e-6;
        if (!(c.slit.width > 0.0))
            slit.fail("width_um", "must be positive");
    }
    const long long pulses = root.integer("n_pulses", d.n_pulses);
    if (pulses < 1 || pulses > 100000)
        root.fail("n_pulses", "must lie in [1, 100000]");
    c.n_pulses = static_cast<int>(pulses);
    c.loss_compensation = root.boolean("loss_compensation", d.loss_compensation);
    c.report_magnified = root.boolean("report_magnified", d.report_magnified);
    cfg.plates_in_beam = root.boolean("plates_in_beam", true);

    {
        Section ref = root.child("reference", {"N", "m", "iterations", "phase_oracle_rad", "phase_diffusion_rad"});
        const ReferenceOptions rd;
        cfg.reference.N = ref.number("N", rd.N);
        cfg.reference.m = ref.number("m", rd.m);
        const long long k = ref.integer("iterations", rd.iterations);
        cfg.reference.phase_oracle = ref.number("phase_oracle_rad", rd.phase_oracle);
        cfg.reference.phase_diffusion = ref.number("phase_diffusion_rad", rd.phase_diffusion);
        if (!(cfg.reference.N > 0.0))
            ref.fail("N", "must be positive");
        if (!(cfg.reference.m > 0.0 && cfg.reference.m <= cfg.reference.N))
            ref.fail("m", "must lie in (0, N]");
        if (k < 0 || k > 1000000)
            ref.fail("iterations", "must lie in [0, 1000000]");
        cfg.reference.iterations = static_cast<int>(k);
    }
    {
        Section an = root.child("analysis", {"numerical_aperture", "resolution_um", "dims", "ideal_phase_estimate"});
        cfg.analysis.numerical_aperture = an.number("numerical_aperture", 0.03);
        if (!(cfg.analysis.numerical_aperture > 0.0 && cfg.analysis.numerical_aperture <= 1.0))
            an.fail("numerical_aperture", "must lie in (0, 1]");
        if (an.find("resolution_um")) {
            const double r = an.number("resolution_um", 0.0) * 1e-6;
            if (!(r > 0.0))
                an.fail("resolution_um", "must be positive");
            cfg.analysis.resolution = r;
        }
        const long long dims = an.integer("dims", 1);
        if (dims != 1 && dims != 2)
            an.fail("dims", "must be 1 or 2");
        cfg.analysis.dims = static_cast<int>(dims);
        cfg.analysis.ideal_phase_estimate = an.boolean("ideal_phase_estimate", false);
    }
    {
        const long long w = root.integer("workers", 1);
        if (w < 1 || w > 1024)
            root.fail("workers", "must lie in [1, 1024]");
        cfg.workers = static_cast<int>(w);
    }

    if (const json* axes = root.find("sweep")) {
        if (!axes->is_array())
            root.fail("sweep", "must be an array of {parameter, values} objects");
        for (std::size_t i = 0; i < axes->size(); ++i) {
            const json& a = (*axes)[i];
            const std::string where = fmt::format("sweep[{}]", i);
            if (!a.is_object())
                throw ConfigError(fmt::format("'{}' must be an object", where));
            for (const auto& [key, value] : a.items())
                if (key != "parameter" && key != "values")
                    throw ConfigError(fmt::format("unknown key '{}.{}'", where, key));
            if (!a.contains("parameter") || !a["parameter"].is_string() || a["parameter"].get<std::string>().empty())
                throw ConfigError(fmt::format("'{}.parameter' must be a non-empty string", where));
            if (!a.contains("values") || !a["values"].is_array() || a["values"].empty())
                throw ConfigError(fmt::format("'{}.values' must be a non-empty array", where));
            const auto param = a["parameter"].get<std::string>();
            if (param == "sweep" || param.rfind("sweep.", 0) == 0)
                throw ConfigError(fmt::format("'{}.parameter' cannot address the sweep itself", where));
            cfg.sweep.push_back({param, std::vector<json>(a["values"].begin(), a["values"].end())});
        }
    }
    out.erase("sweep");
    cfg.expanded = std::move(out);

    try {
        cfg.effective_cavity().validate();
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("physical constraint violated: {}", e.what()));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(fmt::format("cannot open configuration file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError(fmt::format("error reading configuration file '{}'", path.string()));
    return expand_config(parse_config_text(buf.str()));
}

nlohmann::json config_echo(const ExperimentConfig& config)
{
    return config.expanded;
}

} // namespace fgrover
