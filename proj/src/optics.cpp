#include "fgrover/optics.hpp"

#include "fgrover/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fgrover {

double TrapezoidPhasePlate::phase_at(double x) const noexcept
{
    const double d = std::abs(x - center) - 0.5 * flat_width;
    if (d <= 0.0)
        return phase_depth;
    if (d >= ramp_width)
        return 0.0;
    return phase_depth * (1.0 - d / ramp_width);
}

void TrapezoidPhasePlate::validate() const
{
    if (!(flat_width > 0.0))
        throw ConfigError(fmt::format("plate flat width = {} m must be positive", flat_width));
    if (!(ramp_width >= 0.0))
        throw ConfigError(fmt::format("plate ramp width = {} m must be non-negative", ramp_width));
    if (!(std::abs(phase_depth) <= std::numbers::pi))
        throw ConfigError(fmt::format("plate phase depth = {} rad must satisfy |phase| <= pi", phase_depth));
    if (!std::isfinite(center))
        throw ConfigError("plate center must be finite");
}

void LossModel::validate() const
{
    if (!(roundtrip_energy_factor > 0.0 && roundtrip_energy_factor <= 1.0))
        throw ConfigError(fmt::format("roundtrip energy factor = {} must lie in (0, 1]", roundtrip_energy_factor));
}

void Slit::validate() const
{
    if (!(width > 0.0))
        throw ConfigError(fmt::format("slit width = {} m must be positive", width));
    if (!std::isfinite(center))
        throw ConfigError("slit center must be finite");
}

std::vector<double> phase_profile(const TrapezoidPhasePlate& plate, const Grid1D& grid)
{
    plate.validate();
    const double lo = grid.coordinate(0);
    const double hi = grid.coordinate(grid.size() - 1);
    if (plate.center - plate.half_support() < lo || plate.center + plate.half_support() > hi)
        throw ConfigError(fmt::format("plate support [{}, {}] m is clipped by the grid [{}, {}] m",
                                      plate.center - plate.half_support(),
                                      plate.center + plate.half_support(), lo, hi));
    std::vector<double> phase(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        phase[i] = plate.phase_at(grid.coordinate(i));
    return phase;
}

ComplexField apply_plate(const ComplexField& field, const TrapezoidPhasePlate& plate, int passes)
{
    if (passes != 1 && passes != 2)
        throw ConfigError(fmt::format("plate passes = {} must be 1 or 2", passes));
    const auto phase = phase_profile(plate, field.grid());
    ComplexField out = field;
    auto a = out.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (phase[i] != 0.0)
            a[i] *= std::polar(1.0, passes * phase[i]);
    return out;
}

ComplexField apply_roundtrip_loss(const ComplexField& field, const LossModel& loss,
                                  double fraction_of_roundtrip)
{
    loss.validate();
    if (!(fraction_of_roundtrip > 0.0 && fraction_of_roundtrip <= 1.0))
        throw ConfigError(fmt::format("loss fraction of roundtrip = {} must lie in (0, 1]", fraction_of_roundtrip));
    ComplexField out = field;
    if (loss.roundtrip_energy_factor == 1.0)
        return out;
    const double scale = std::pow(loss.roundtrip_energy_factor, 0.5 * fraction_of_roundtrip);
    for (auto& v : out.amplitudes())
        v *= scale;
    return out;
}

double slit_energy(std::span<const double> intensity, const Grid1D& grid, const Slit& slit)
{
    slit.validate();
    if (intensity.size() != grid.size())
        throw DimensionError("slit_energy: intensity length does not match grid");
    const double lo = slit.center - 0.5 * slit.width;
    const double hi = slit.center + 0.5 * slit.width;
    const double p = grid.pitch();
    double energy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.coordinate(i);
        const double overlap = std::min(hi, x + 0.5 * p) - std::max(lo, x - 0.5 * p);
        if (overlap > 0.0)
            energy += intensity[i] * overlap;
    }
    return energy;
}

double slit_energy(const ComplexField& field, const Slit& slit)
{
    return slit_energy(field.intensity(), field.grid(), slit);
}

} // namespace fgrover
