#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fgrover {

using Complex = std::complex<double>;

/// Uniform 1D sampling lattice centered on x = 0.
///
/// Sample i sits at x_i = (i - n/2) * pitch, so index n/2 is the origin and
/// index 0 is the single unpaired sample at -extent/2.
class Grid1D {
public:
    /// Throws ConfigError unless n_samples is a power of two >= 16 and pitch > 0.
    Grid1D(std::size_t n_samples, double pitch_m);

    std::size_t size() const noexcept { return n_; }
    double pitch() const noexcept { return pitch_; }
    double extent() const noexcept { return static_cast<double>(n_) * pitch_; }

    double coordinate(std::size_t i) const noexcept
    {
        return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * pitch_;
    }
    std::vector<double> coordinates() const;

    /// Nearest sample to x, clamped to the grid.
    std::size_t nearest_index(double x) const noexcept;

    /// Reflection about the center sample: x_i -> -x_i (index 0 maps to itself).
    std::size_t parity_index(std::size_t i) const noexcept { return (n_ - i) % n_; }

    bool operator==(const Grid1D&) const = default;

private:
    std::size_t n_;
    double pitch_;
};

/// Lens Fourier-plane lattice paired with a source lattice.
///
/// For a lens of focal length f at wavelength lambda the Fourier-plane pitch
/// is lambda * f / extent(source). dual() swaps the roles of the two lattices,
/// so transforming twice lands back on the exact source grid.
class FourierGrid {
public:
    FourierGrid(Grid1D source, double wavelength_m, double focal_length_m);

    const Grid1D& source() const noexcept { return source_; }
    const Grid1D& target() const noexcept { return target_; }
    double wavelength() const noexcept { return wavelength_; }
    double focal_length() const noexcept { return focal_length_; }
    double pitch() const noexcept { return target_.pitch(); }
    double extent() const noexcept { return target_.extent(); }

    FourierGrid dual() const { return FourierGrid(target_, source_, wavelength_, focal_length_); }

private:
    FourierGrid(Grid1D source, Grid1D target, double wavelength_m, double focal_length_m)
        : source_(source), target_(target), wavelength_(wavelength_m), focal_length_(focal_length_m)
    {
    }

    Grid1D source_;
    Grid1D target_;
    double wavelength_;
    double focal_length_;
};

/// Complex field amplitudes E(x) sampled on a Grid1D.
class ComplexField {
public:
    explicit ComplexField(Grid1D grid);
    ComplexField(Grid1D grid, std::vector<Complex> amplitudes);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }

    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }
    Complex& operator[](std::size_t i) noexcept { return amplitudes_[i]; }

    std::vector<double> intensity() const;

private:
    Grid1D grid_;
    std::vector<Complex> amplitudes_;
};

/// Zero-phase field whose intensity is a gaussian of the given FWHM centered
/// at x = 0, normalized to total_energy == 1.
ComplexField gaussian_input(const Grid1D& grid, double fwhm_m);

/// Unitary DFT with zero frequency at sample n/2 in both domains. The result
/// lives on fgrid.target(). Applying it twice is exactly the parity permutation.
ComplexField dft_centered(const ComplexField& field, const FourierGrid& fgrid);

/// Inverse of dft_centered: maps a field on fgrid.target() back to fgrid.source().
ComplexField idft_centered(const ComplexField& field, const FourierGrid& fgrid);

/// Returns the field reflected about the grid center.
ComplexField parity(const ComplexField& field);

/// Sum of |a_i|^2 (discrete norm, the quantity a unitary DFT conserves).
double norm_squared(const ComplexField& field);

/// Sum of |a_i|^2 * pitch. Comparable only between fields on grids of equal pitch.
double total_energy(const ComplexField& field);

/// Full width at half maximum of |E|^2, linearly interpolated between the
/// bracketing samples. A flat top counts as one maximum; two separated
/// maxima, or a maximum whose half-level crossing falls off the grid, throw
/// MeasurementError.
double intensity_fwhm(const ComplexField& field);

struct Peak {
    double position;
    double value;
    std::size_t index;
};

/// Global intensity maximum. Ties go to the smaller coordinate.
Peak peak(const ComplexField& field);

/// Midpoint of the half-maximum interval around the global maximum. For a
/// flat-topped feature on a sloped background this locates the feature
/// center, where peak() would land on the plateau's higher edge.
double peak_center(std::span<const double> intensity, const Grid1D& grid);

} // namespace fgrover
