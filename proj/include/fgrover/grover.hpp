#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fgrover {

/// Two-amplitude Grover state: every marked item carries a_marked and every
/// unmarked item a_unmarked. N and m are real so that non-integer effective
/// database sizes (such as 31.7) can be modeled.
///
/// Phase convention: one cavity roundtrip passes each plate twice, so a
/// cavity run with per-pass phase phi corresponds to phase_oracle =
/// phase_diffusion = 2 * phi here.
struct GroverReducedState {
    double N = 1.0;
    double m = 1.0;
    std::complex<double> a_marked;
    std::complex<double> a_unmarked;

    /// Uniform superposition 1/sqrt(N) on every item.
    static GroverReducedState uniform(double N, double m);

    double norm() const noexcept;
    double success_probability() const noexcept;
};

struct FullGroverState {
    std::size_t N = 0;
    std::vector<std::size_t> marked;
    std::vector<std::complex<double>> amplitudes;

    static FullGroverState uniform(std::size_t N, std::vector<std::size_t> marked);

    double norm() const noexcept;
    double success_probability() const noexcept;
};

/// Oracle: marked amplitudes pick up exp(i phase_oracle). Diffusion:
/// I - (1 - exp(i phase_diffusion)) |s><s|, which at phase_diffusion = pi is
/// inversion about the average up to a global sign.
GroverReducedState reduced_iterate(const GroverReducedState& state, double phase_oracle,
                                   double phase_diffusion);
FullGroverState full_iterate(const FullGroverState& state, double phase_oracle, double phase_diffusion);

/// sin^2((2k + 1) theta) with theta = asin(sqrt(m/N)).
double success_probability(double k, double N, double m);

/// [pi / (4 sin|phase_per_pass|)] sqrt(N/m); phase_per_pass is the single-pass plate phase.
double optimal_iterations(double N, double m, double phase_per_pass);

/// (pi/2) sqrt(N/m).
double oscillation_period(double N, double m);

/// Success probability of the reduced model after 0..k_max iterations from the uniform state.
std::vector<double> reduced_success_trace(double N, double m, double phase_oracle, double phase_diffusion,
                                          int k_max);

/// Largest success probability over 0..k_max iterations.
double max_success_probability(double N, double m, double phase_oracle, double phase_diffusion, int k_max);

} // namespace fgrover
