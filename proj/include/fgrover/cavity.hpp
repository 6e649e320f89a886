#pragma once

#include "fgrover/field.hpp"
#include "fgrover/optics.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace fgrover {

/// Physical description of the two-mirror cavity.
///
/// All propagation happens in oracle-plane coordinates with a single lens
/// Fourier grid (wavelength, focal_length_1). focal_length_2 only enters as
/// the output image magnification when report_magnified is set. The slit is
/// positioned in the same oracle-plane frame as the reported profiles.
struct CavityConfig {
    double wavelength = 532e-9;
    double input_fwhm = 1.33e-3;
    TrapezoidPhasePlate oracle_plate{150e-6, 42e-6, 4e-6, -1.1};
    TrapezoidPhasePlate iaa_plate{0.0, 136e-6, 8e-6, -1.1};
    double focal_length_1 = 0.4;
    double focal_length_2 = 0.6;
    LossModel loss{0.75};
    double output_mirror_transmission = 0.02;
    Slit slit{150e-6, 55e-6};
    Grid1D grid{16384, 2e-6};
    int n_pulses = 12;
    bool loss_compensation = true;
    bool report_magnified = false;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
    FourierGrid fourier_grid() const { return FourierGrid(grid, wavelength, focal_length_1); }
    /// Multiplier from simulation coordinates to reported coordinates.
    double coordinate_scale() const noexcept { return report_magnified ? -focal_length_2 / focal_length_1 : 1.0; }
};

struct PulseRecord {
    double iteration_count = 0.0;
    /// Intensity coupled out through the output mirror, oracle orientation.
    std::vector<double> intensity;
    /// intensity * loss^(-iteration_count) when loss compensation is on; else equal to intensity.
    std::vector<double> compensated_intensity;
    /// Center of the half-maximum interval around the highest sample (reported coordinates).
    double peak_position = 0.0;
    /// Highest sample of compensated_intensity.
    double peak_value = 0.0;
    /// Set when the peak or its half-maximum crossings touch the grid edge.
    bool peak_at_edge = false;
    /// Energy of the recorded (uncompensated) profile.
    double total_energy = 0.0;
};

struct SearchTrace {
    Grid1D grid;
    double coordinate_scale = 1.0;
    std::vector<PulseRecord> pulses;

    double reported_coordinate(std::size_t i) const { return grid.coordinate(i) * coordinate_scale; }
};

/// One M1 -> M2 traversal: F Phi_f F Phi_o with single-pass plates and half a
/// roundtrip of loss. The result is spatially inverted with respect to the
/// oracle frame (two lens transforms).
ComplexField half_pass_forward(const ComplexField& field, const CavityConfig& config);

/// The M2 -> M1 traversal: Phi_o F Phi_f F, half a roundtrip of loss.
ComplexField half_pass_backward(const ComplexField& field, const CavityConfig& config);

/// One Grover iteration in the oracle frame: Phi_o twice, lens transform,
/// Phi_f twice, inverse transform, and a full roundtrip of loss.
ComplexField grover_iterate(const ComplexField& field, const CavityConfig& config);

/// Runs the cavity from the gaussian input beam and records every output pulse.
SearchTrace run_search(const CavityConfig& config);
/// Same, starting from an arbitrary field on config.grid.
SearchTrace run_search(const CavityConfig& config, const ComplexField& input);

/// (iteration_count, energy through the slit) for each uncompensated pulse.
std::vector<std::pair<double, double>> pulse_train(const CavityConfig& config, const Slit& slit);
std::vector<std::pair<double, double>> pulse_train(const SearchTrace& trace, const Slit& slit);

} // namespace fgrover
