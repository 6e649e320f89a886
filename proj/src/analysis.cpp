#include "fgrover/analysis.hpp"

#include "fgrover/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace fgrover {

PeakTrace::PeakTrace(std::vector<PeakSample> samples) : samples_(std::move(samples))
{
    for (std::size_t i = 1; i < samples_.size(); ++i)
        if (!(samples_[i].iteration_count > samples_[i - 1].iteration_count))
            throw SimulationError("peak trace iteration counts must be strictly increasing");
}

PeakTrace PeakTrace::from_search(const SearchTrace& trace)
{
    std::vector<PeakSample> samples;
    samples.reserve(trace.pulses.size());
    for (const auto& p : trace.pulses)
        samples.push_back({p.iteration_count, p.peak_value, p.peak_position});
    return PeakTrace(std::move(samples));
}

double first_maximum(const PeakTrace& trace)
{
    const auto& s = trace.samples();
    if (s.size() < 3)
        throw SimulationError(fmt::format("first_maximum needs at least 3 pulses, got {}", s.size()));
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double y0 = s[i - 1].peak_value, y1 = s[i].peak_value, y2 = s[i + 1].peak_value;
        if (!(y1 > y0 && y1 >= y2))
            continue;
        const double x0 = s[i - 1].iteration_count, x1 = s[i].iteration_count, x2 = s[i + 1].iteration_count;
        const double a = (x1 - x0) * (y1 - y2);
        const double b = (x1 - x2) * (y1 - y0);
        // vertex of the interpolating parabola
        return x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / (a - b);
    }
    throw SimulationError("peak trace has no interior maximum; run more pulses");
}

double estimate_nm(double k_star, double phase_per_pass)
{
    if (!(std::abs(phase_per_pass) > 0.0))
        throw ConfigError("estimate_nm: phase per pass must be nonzero");
    const double r = 4.0 * std::sin(std::abs(phase_per_pass)) * k_star / std::numbers::pi;
    return r * r;
}

double expected_nm(double beam_fwhm, double flat_width)
{
    if (!(beam_fwhm > 0.0) || !(flat_width > 0.0))
        throw ConfigError(fmt::format("expected_nm: beam ({}) and line width ({}) must be positive", beam_fwhm,
                                      flat_width));
    return beam_fwhm / flat_width;
}

double rayleigh_resolution(double wavelength, double numerical_aperture)
{
    if (!(wavelength > 0.0) || !(numerical_aperture > 0.0))
        throw ConfigError(fmt::format("rayleigh_resolution: wavelength ({}) and NA ({}) must be positive",
                                      wavelength, numerical_aperture));
    return 0.61 * wavelength / numerical_aperture;
}

namespace {

void check_geometry(double beam_diameter, double resolution, int dims)
{
    if (!(beam_diameter > 0.0) || !(resolution > 0.0))
        throw ConfigError(fmt::format("beam diameter ({}) and resolution ({}) must be positive", beam_diameter,
                                      resolution));
    if (dims != 1 && dims != 2)
        throw ConfigError(fmt::format("dims = {} must be 1 or 2", dims));
}

} // namespace

double max_database_size(double beam_diameter, double resolution, int dims)
{
    check_geometry(beam_diameter, resolution, dims);
    return std::pow(beam_diameter / resolution, dims);
}

double equivalent_qubits(double beam_diameter, double resolution, int dims)
{
    check_geometry(beam_diameter, resolution, dims);
    return dims * std::log2(beam_diameter / resolution);
}

} // namespace fgrover
