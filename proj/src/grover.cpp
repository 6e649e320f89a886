#include "fgrover/grover.hpp"

#include "fgrover/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fgrover {

namespace {

using cplx = std::complex<double>;

void check_sizes(double N, double m)
{
    if (!(N > 0.0) || !std::isfinite(N))
        throw ConfigError(fmt::format("database size N = {} must be positive", N));
    if (!(m > 0.0) || !(m <= N))
        throw ConfigError(fmt::format("marked count m = {} must lie in (0, N = {}]", m, N));
}

void check_normalized(double norm)
{
    if (std::abs(norm - 1.0) > 1e-9)
        throw SimulationError(fmt::format("Grover state is not normalized (norm^2 = {})", norm));
}

} // namespace

GroverReducedState GroverReducedState::uniform(double N, double m)
{
    check_sizes(N, m);
    const double a = 1.0 / std::sqrt(N);
    return {N, m, a, a};
}

double GroverReducedState::norm() const noexcept
{
    return m * std::norm(a_marked) + (N - m) * std::norm(a_unmarked);
}

double GroverReducedState::success_probability() const noexcept
{
    return m * std::norm(a_marked);
}

FullGroverState FullGroverState::uniform(std::size_t N, std::vector<std::size_t> marked)
{
    if (N == 0)
        throw ConfigError("database size N must be positive");
    std::sort(marked.begin(), marked.end());
    if (marked.empty() || std::adjacent_find(marked.begin(), marked.end()) != marked.end() || marked.back() >= N)
        throw ConfigError(fmt::format("marked set must be non-empty, unique and inside [0, {})", N));
    return {N, std::move(marked), std::vector<cplx>(N, cplx(1.0 / std::sqrt(static_cast<double>(N))))};
}

double FullGroverState::norm() const noexcept
{
    double s = 0.0;
    for (const auto& a : amplitudes)
        s += std::norm(a);
    return s;
}

double FullGroverState::success_probability() const noexcept
{
    double s = 0.0;
    for (auto i : marked)
        s += std::norm(amplitudes[i]);
    return s;
}

GroverReducedState reduced_iterate(const GroverReducedState& state, double phase_oracle, double phase_diffusion)
{
    check_sizes(state.N, state.m);
    check_normalized(state.norm());
    GroverReducedState out = state;
    out.a_marked *= std::polar(1.0, phase_oracle);
    const cplx average = (out.m * out.a_marked + (out.N - out.m) * out.a_unmarked) / out.N;
    const cplx shift = (std::polar(1.0, phase_diffusion) - 1.0) * average;
    out.a_marked += shift;
    out.a_unmarked += shift;
    return out;
}

FullGroverState full_iterate(const FullGroverState& state, double phase_oracle, double phase_diffusion)
{
    check_normalized(state.norm());
    if (state.amplitudes.size() != state.N)
        throw DimensionError("full Grover state: amplitude count differs from N");
    FullGroverState out = state;
    const cplx oracle = std::polar(1.0, phase_oracle);
    for (auto i : out.marked)
        out.amplitudes[i] *= oracle;
    cplx sum = 0.0;
    for (const auto& a : out.amplitudes)
        sum += a;
    const cplx shift = (std::polar(1.0, phase_diffusion) - 1.0) * sum / static_cast<double>(out.N);
    for (auto& a : out.amplitudes)
        a += shift;
    return out;
}

double success_probability(double k, double N, double m)
{
    check_sizes(N, m);
    const double theta = std::asin(std::sqrt(m / N));
    const double s = std::sin((2.0 * k + 1.0) * theta);
    return s * s;
}

double optimal_iterations(double N, double m, double phase_per_pass)
{
    check_sizes(N, m);
    const double phi = std::abs(phase_per_pass);
    if (!(phi > 0.0 && phi <= std::numbers::pi / 2.0))
        throw ConfigError(fmt::format("phase per pass = {} rad must satisfy 0 < |phase| <= pi/2", phase_per_pass));
    return std::numbers::pi / (4.0 * std::sin(phi)) * std::sqrt(N / m);
}

double oscillation_period(double N, double m)
{
    check_sizes(N, m);
    return std::numbers::pi / 2.0 * std::sqrt(N / m);
}

std::vector<double> reduced_success_trace(double N, double m, double phase_oracle, double phase_diffusion,
                                          int k_max)
{
    auto state = GroverReducedState::uniform(N, m);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(k_max, 0)) + 1);
    out.push_back(state.success_probability());
    for (int k = 1; k <= k_max; ++k) {
        state = reduced_iterate(state, phase_oracle, phase_diffusion);
        out.push_back(state.success_probability());
    }
    return out;
}

double max_success_probability(double N, double m, double phase_oracle, double phase_diffusion, int k_max)
{
    const auto trace = reduced_success_trace(N, m, phase_oracle, phase_diffusion, k_max);
    return *std::max_element(trace.begin(), trace.end());
}

} // namespace fgrover
