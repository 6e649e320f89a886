#pragma once

#include "fgrover/cavity.hpp"

#include <vector>

namespace fgrover {

struct PeakSample {
    double iteration_count;
    double peak_value;
    double peak_position;
};

/// Peak growth observable: one sample per output pulse, iteration counts strictly increasing.
class PeakTrace {
public:
    explicit PeakTrace(std::vector<PeakSample> samples);
    static PeakTrace from_search(const SearchTrace& trace);

    const std::vector<PeakSample>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }

private:
    std::vector<PeakSample> samples_;
};

/// Iteration count of the first interior local maximum of peak_value, refined
/// by the vertex of the parabola through the maximum and its two neighbours.
/// Throws SimulationError when the trace has fewer than three points or no
/// interior maximum.
double first_maximum(const PeakTrace& trace);

/// N/m implied by a first maximum at k_star with single-pass plate phase phi:
/// (4 sin|phi| k_star / pi)^2. phi = pi/2 gives the ideal-phase (4 k_star / pi)^2.
double estimate_nm(double k_star, double phase_per_pass);

/// Beam diameter over oracle line width.
double expected_nm(double beam_fwhm, double flat_width);

/// 0.61 lambda / NA.
double rayleigh_resolution(double wavelength, double numerical_aperture);

/// (beam_diameter / resolution)^dims for dims in {1, 2}.
double max_database_size(double beam_diameter, double resolution, int dims);

/// dims * log2(beam_diameter / resolution).
double equivalent_qubits(double beam_diameter, double resolution, int dims);

} // namespace fgrover
