#include "fgrover/field.hpp"

#include "fft.hpp"
#include "fgrover/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace fgrover {

Grid1D::Grid1D(std::size_t n_samples, double pitch_m) : n_(n_samples), pitch_(pitch_m)
{
    if (n_samples < 16 || !std::has_single_bit(n_samples))
        throw ConfigError(fmt::format("grid n_samples = {} must be a power of two >= 16", n_samples));
    if (!(pitch_m > 0.0) || !std::isfinite(pitch_m))
        throw ConfigError(fmt::format("grid pitch = {} m must be positive", pitch_m));
}

std::vector<double> Grid1D::coordinates() const
{
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i)
        x[i] = coordinate(i);
    return x;
}

std::size_t Grid1D::nearest_index(double x) const noexcept
{
    const double pos = std::round(x / pitch_) + static_cast<double>(n_ / 2);
    if (pos <= 0.0)
        return 0;
    if (pos >= static_cast<double>(n_ - 1))
        return n_ - 1;
    return static_cast<std::size_t>(pos);
}

FourierGrid::FourierGrid(Grid1D source, double wavelength_m, double focal_length_m)
    : source_(source),
      target_(source.size(), wavelength_m * focal_length_m / source.extent()),
      wavelength_(wavelength_m),
      focal_length_(focal_length_m)
{
    if (!(wavelength_m > 0.0))
        throw ConfigError(fmt::format("wavelength = {} m must be positive", wavelength_m));
    if (!(focal_length_m > 0.0))
        throw ConfigError(fmt::format("focal length = {} m must be positive", focal_length_m));
}

ComplexField::ComplexField(Grid1D grid) : grid_(grid), amplitudes_(grid.size()) {}

ComplexField::ComplexField(Grid1D grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() != grid_.size())
        throw DimensionError(fmt::format("field has {} amplitudes but grid has {} samples",
                                         amplitudes_.size(), grid_.size()));
}

std::vector<double> ComplexField::intensity() const
{
    std::vector<double> out(amplitudes_.size());
    std::transform(amplitudes_.begin(), amplitudes_.end(), out.begin(),
                   [](const Complex& a) { return std::norm(a); });
    return out;
}

ComplexField gaussian_input(const Grid1D& grid, double fwhm_m)
{
    if (!(fwhm_m > 0.0) || !(fwhm_m < grid.extent() / 2.0))
        throw ConfigError(fmt::format("input fwhm = {} m must lie in (0, {}) m", fwhm_m, grid.extent() / 2.0));

    // |E|^2 = exp(-4 ln2 x^2 / w^2)
    const double k = 2.0 * std::log(2.0) / (fwhm_m * fwhm_m);
    std::vector<Complex> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.coordinate(i);
        a[i] = std::exp(-k * x * x);
    }
    ComplexField field(grid, std::move(a));
    const double scale = 1.0 / std::sqrt(total_energy(field));
    for (auto& v : field.amplitudes())
        v *= scale;
    return field;
}

namespace {

// Swap halves: the centered <-> corner-origin reordering for even n.
void swap_halves(std::span<Complex> data)
{
    std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(data.size() / 2), data.end());
}

ComplexField centered_transform(const ComplexField& field, const Grid1D& out_grid,
                                detail::FftDirection direction)
{
    std::vector<Complex> buf(field.amplitudes().begin(), field.amplitudes().end());
    swap_halves(buf);
    detail::fft_inplace(buf, direction);
    swap_halves(buf);
    const double norm = 1.0 / std::sqrt(static_cast<double>(buf.size()));
    for (auto& v : buf)
        v *= norm;
    return ComplexField(out_grid, std::move(buf));
}

} // namespace

ComplexField dft_centered(const ComplexField& field, const FourierGrid& fgrid)
{
    if (field.grid() != fgrid.source())
        throw DimensionError("dft_centered: field grid does not match the Fourier grid's source");
    return centered_transform(field, fgrid.target(), detail::FftDirection::forward);
}

ComplexField idft_centered(const ComplexField& field, const FourierGrid& fgrid)
{
    if (field.grid() != fgrid.target())
        throw DimensionError("idft_centered: field grid does not match the Fourier-plane grid");
    return centered_transform(field, fgrid.source(), detail::FftDirection::backward);
}

ComplexField parity(const ComplexField& field)
{
    const auto& g = field.grid();
    std::vector<Complex> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = field[g.parity_index(i)];
    return ComplexField(g, std::move(out));
}

double norm_squared(const ComplexField& field)
{
    double sum = 0.0;
    for (const auto& a : field.amplitudes())
        sum += std::norm(a);
    return sum;
}

double total_energy(const ComplexField& field)
{
    return norm_squared(field) * field.grid().pitch();
}

namespace {

struct HalfMaxInterval {
    double left;
    double right;
};

// Crossings of max/2 walking outward from the run of samples [first, last].
HalfMaxInterval half_max_interval(std::span<const double> I, const Grid1D& grid, std::size_t first,
                                  std::size_t last)
{
    const std::size_t n = I.size();
    if (first == 0 || last == n - 1)
        throw MeasurementError("intensity maximum lies on the grid boundary (profile clipped)");
    const double half = 0.5 * I[first];

    std::size_t j = first;
    while (j > 0 && I[j - 1] >= half)
        --j;
    if (j == 0)
        throw MeasurementError("half-maximum crossing falls off the left grid edge (profile clipped)");
    // crossing between j-1 (below) and j (at or above)
    const double left =
        grid.coordinate(j - 1) + (half - I[j - 1]) / (I[j] - I[j - 1]) * grid.pitch();

    std::size_t k = last;
    while (k + 1 < n && I[k + 1] >= half)
        ++k;
    if (k + 1 == n)
        throw MeasurementError("half-maximum crossing falls off the right grid edge (profile clipped)");
    const double right = grid.coordinate(k) + (I[k] - half) / (I[k] - I[k + 1]) * grid.pitch();
    return {left, right};
}

} // namespace

double intensity_fwhm(const ComplexField& field)
{
    const auto I = field.intensity();
    const auto top = std::max_element(I.begin(), I.end());
    const double max = *top;
    if (!(max > 0.0))
        throw MeasurementError("intensity_fwhm: profile is identically zero");

    const double level = max * (1.0 - 1e-12);
    const auto first = static_cast<std::size_t>(top - I.begin());
    std::size_t last = first;
    while (last + 1 < I.size() && I[last + 1] >= level)
        ++last;
    for (std::size_t i = last + 1; i < I.size(); ++i)
        if (I[i] >= level)
            throw MeasurementError(fmt::format(
                "intensity_fwhm: separated equal maxima at samples {} and {}", first, i));

    const auto interval = half_max_interval(I, field.grid(), first, last);
    return interval.right - interval.left;
}

Peak peak(const ComplexField& field)
{
    const auto I = field.intensity();
    // max_element returns the first maximum, i.e. the smallest coordinate.
    const auto top = std::max_element(I.begin(), I.end());
    const auto idx = static_cast<std::size_t>(top - I.begin());
    return {field.grid().coordinate(idx), *top, idx};
}

double peak_center(std::span<const double> intensity, const Grid1D& grid)
{
    if (intensity.size() != grid.size())
        throw DimensionError("peak_center: intensity length does not match grid");
    const auto top = std::max_element(intensity.begin(), intensity.end());
    if (!(*top > 0.0))
        throw MeasurementError("peak_center: profile is identically zero");
    const auto idx = static_cast<std::size_t>(top - intensity.begin());
    const auto interval = half_max_interval(intensity, grid, idx, idx);
    return 0.5 * (interval.left + interval.right);
}

} // namespace fgrover
