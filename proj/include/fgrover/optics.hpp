#pragma once

#include "fgrover/field.hpp"

#include <vector>

namespace fgrover {

/// Trapezoidal phase line: phase_depth on the flat top, zero beyond the ramps,
/// linear and continuous in between. phase_depth is per single pass.
struct TrapezoidPhasePlate {
    double center = 0.0;
    double flat_width = 0.0;
    double ramp_width = 0.0;
    double phase_depth = 0.0;

    /// Half-width of the nonzero support.
    double half_support() const noexcept { return 0.5 * flat_width + ramp_width; }
    double phase_at(double x) const noexcept;
    /// Throws ConfigError on flat_width <= 0, ramp_width < 0 or |phase_depth| > pi.
    void validate() const;
};

/// Aggregate roundtrip loss: the circulating energy is multiplied by
/// roundtrip_energy_factor once per full roundtrip.
struct LossModel {
    double roundtrip_energy_factor = 0.75;
    void validate() const;
};

struct Slit {
    double center = 0.0;
    double width = 55e-6;
    void validate() const;
};

/// Per-sample phase of the plate on the grid. Throws ConfigError when the
/// plate support is clipped by the grid edge.
std::vector<double> phase_profile(const TrapezoidPhasePlate& plate, const Grid1D& grid);

/// Multiplies by exp(i * passes * phase(x)); passes must be 1 or 2.
ComplexField apply_plate(const ComplexField& field, const TrapezoidPhasePlate& plate, int passes);

/// Scales amplitudes by factor^(fraction/2), i.e. energy by factor^fraction.
ComplexField apply_roundtrip_loss(const ComplexField& field, const LossModel& loss,
                                  double fraction_of_roundtrip);

/// Energy transmitted through the slit window. Edge samples are weighted by the
/// fraction of their cell [x_i - pitch/2, x_i + pitch/2] that the slit covers.
double slit_energy(const ComplexField& field, const Slit& slit);
double slit_energy(std::span<const double> intensity, const Grid1D& grid, const Slit& slit);

/// Position in a lens' back focal plane of spatial frequency nu (cycles/m).
constexpr double fourier_plane_coordinate(double spatial_frequency, double wavelength_m,
                                          double focal_length_m) noexcept
{
    return wavelength_m * focal_length_m * spatial_frequency;
}

} // namespace fgrover
