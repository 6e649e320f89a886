#include "fgrover/cavity.hpp"

#include "fgrover/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace fgrover {

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(fmt::format("{} = {} must be positive", name, value));
}

void require_inside(const TrapezoidPhasePlate& plate, const Grid1D& grid, const char* name)
{
    const double lo = grid.coordinate(0);
    const double hi = grid.coordinate(grid.size() - 1);
    if (plate.center - plate.half_support() < lo || plate.center + plate.half_support() > hi)
        throw ConfigError(fmt::format("{} support [{}, {}] m does not fit inside the grid [{}, {}] m", name,
                                      plate.center - plate.half_support(),
                                      plate.center + plate.half_support(), lo, hi));
}

} // namespace

void CavityConfig::validate() const
{
    require_positive(wavelength, "wavelength");
    require_positive(input_fwhm, "input_fwhm");
    require_positive(focal_length_1, "focal_length_1");
    require_positive(focal_length_2, "focal_length_2");
    if (!(input_fwhm < grid.extent() / 2.0))
        throw ConfigError(fmt::format("input_fwhm = {} m must be below half the grid extent ({} m)", input_fwhm,
                                      grid.extent() / 2.0));
    oracle_plate.validate();
    iaa_plate.validate();
    require_inside(oracle_plate, grid, "oracle plate");
    require_inside(iaa_plate, fourier_grid().target(), "IAA plate");
    loss.validate();
    if (!(output_mirror_transmission > 0.0 && output_mirror_transmission <= 1.0))
        throw ConfigError(fmt::format("output mirror transmission = {} must lie in (0, 1]",
                                      output_mirror_transmission));
    slit.validate();
    if (n_pulses < 1)
        throw ConfigError(fmt::format("n_pulses = {} must be at least 1", n_pulses));
}

ComplexField half_pass_forward(const ComplexField& field, const CavityConfig& config)
{
    const auto fgrid = config.fourier_grid();
    auto e = apply_plate(field, config.oracle_plate, 1);
    e = dft_centered(e, fgrid);
    e = apply_plate(e, config.iaa_plate, 1);
    e = dft_centered(e, fgrid.dual());
    return apply_roundtrip_loss(e, config.loss, 0.5);
}

ComplexField half_pass_backward(const ComplexField& field, const CavityConfig& config)
{
    const auto fgrid = config.fourier_grid();
    auto e = dft_centered(field, fgrid);
    e = apply_plate(e, config.iaa_plate, 1);
    e = dft_centered(e, fgrid.dual());
    e = apply_plate(e, config.oracle_plate, 1);
    return apply_roundtrip_loss(e, config.loss, 0.5);
}

ComplexField grover_iterate(const ComplexField& field, const CavityConfig& config)
{
    const auto fgrid = config.fourier_grid();
    auto e = apply_plate(field, config.oracle_plate, 2);
    e = dft_centered(e, fgrid);
    e = apply_plate(e, config.iaa_plate, 2);
    e = idft_centered(e, fgrid);
    return apply_roundtrip_loss(e, config.loss, 1.0);
}

SearchTrace run_search(const CavityConfig& config)
{
    config.validate();
    return run_search(config, gaussian_input(config.grid, config.input_fwhm));
}

SearchTrace run_search(const CavityConfig& config, const ComplexField& input)
{
    config.validate();
    if (input.grid() != config.grid)
        throw DimensionError("run_search: input field is not on the configured grid");

    SearchTrace trace{config.grid, config.coordinate_scale(), {}};
    trace.pulses.reserve(static_cast<std::size_t>(config.n_pulses));

    // Each half pass applies two lens transforms (a spatial inversion); track
    // the accumulated inversions so every profile is reported oracle-side up.
    ComplexField circulating = input;
    int inversions = 0;
    for (int j = 1; j <= config.n_pulses; ++j) {
        const ComplexField output = half_pass_forward(circulating, config);
        ++inversions;
        const ComplexField oriented = inversions % 2 == 0 ? output : parity(output);

        PulseRecord rec;
        rec.iteration_count = j - 0.5;
        rec.intensity = oriented.intensity();
        for (auto& v : rec.intensity)
            v *= config.output_mirror_transmission;
        rec.compensated_intensity = rec.intensity;
        if (config.loss_compensation) {
            const double gain = std::pow(config.loss.roundtrip_energy_factor, -rec.iteration_count);
            for (auto& v : rec.compensated_intensity)
                v *= gain;
        }
        rec.total_energy = 0.0;
        for (double v : rec.intensity)
            rec.total_energy += v * config.grid.pitch();

        std::size_t top = 0;
        for (std::size_t i = 1; i < rec.compensated_intensity.size(); ++i)
            if (rec.compensated_intensity[i] > rec.compensated_intensity[top])
                top = i;
        rec.peak_value = rec.compensated_intensity[top];
        try {
            rec.peak_position = peak_center(rec.compensated_intensity, config.grid) * trace.coordinate_scale;
        } catch (const MeasurementError&) {
            rec.peak_position = trace.reported_coordinate(top);
            rec.peak_at_edge = true;
        }
        trace.pulses.push_back(std::move(rec));

        if (j < config.n_pulses) {
            circulating = half_pass_backward(output, config);
            ++inversions;
        }
    }
    return trace;
}

std::vector<std::pair<double, double>> pulse_train(const SearchTrace& trace, const Slit& slit)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.pulses.size());
    for (const auto& p : trace.pulses)
        out.emplace_back(p.iteration_count, slit_energy(p.intensity, trace.grid, slit));
    return out;
}

std::vector<std::pair<double, double>> pulse_train(const CavityConfig& config, const Slit& slit)
{
    return pulse_train(run_search(config), slit);
}

} // namespace fgrover
