#pragma once

// =============================================================================
// Hirota N-soliton solution of the KdV equation
// =============================================================================
//
//   eta(x, t) = (4 h0^3 / 3) d^2/dx^2 ln F(x, t)
//
//   F = 1 + sum over non-empty S of alpha(S) prod_{i in S} f_i
//   f_i = exp(-2 beta_i (x - s_i - c_i t))
//   beta_i = sqrt(3 a_i / (4 h0^3)),  c_i = sqrt(g h0) (1 + a_i / (2 h0))
//   alpha(S) = prod_{k<l in S} ((sqrt a_k - sqrt a_l) / (sqrt a_k + sqrt a_l))^2
//
// Each F term is exp of a function linear in x, so F extends to complex
// z = x + i y termwise. Evaluation renormalizes F by the dominant term's
// exponent at every point; ln F changes by a linear function of z, which
// leaves every derivative of order >= 2 untouched.
// =============================================================================

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kdvtraj {

inline constexpr std::size_t kMaxSolitons = 20;
inline constexpr double kEqualAmplitudeTolerance = 1e-12;
inline constexpr double kPoleThreshold = 1e-250;

struct FluidParams {
    double h0 = 1.0;  ///< undisturbed depth
    double g = 1.0;   ///< gravitational acceleration
};

struct SolitonSpec {
    double amplitude = 0.0;
    double phase = 0.0;
};

/// One non-empty index subset S of the Hirota expansion.
struct SubsetTerm {
    std::uint32_t mask = 0;    ///< bit i set <=> soliton i in S (0-based)
    double alpha = 1.0;        ///< interaction coefficient, in [0, 1]
    double log_alpha = 0.0;    ///< ln(alpha), -inf when alpha underflows
    double beta_sum = 0.0;     ///< sum of beta_i over S
    double phase_offset = 0.0; ///< sum of 2 beta_i s_i over S
    double speed_offset = 0.0; ///< sum of 2 beta_i c_i over S

    std::vector<std::size_t> indices() const;
    double exponent_slope_x() const noexcept { return -2.0 * beta_sum; }
    double exponent_offset(double t) const noexcept { return phase_offset + speed_offset * t; }
};

/// Immutable problem definition. Built only through build_system().
class SolitonSystem {
public:
    const FluidParams& fluid() const noexcept { return fluid_; }
    std::span<const SolitonSpec> solitons() const noexcept { return solitons_; }
    std::span<const double> betas() const noexcept { return betas_; }
    std::span<const double> speeds() const noexcept { return speeds_; }
    std::span<const double> eps() const noexcept { return eps_; }
    std::span<const SubsetTerm> subsets() const noexcept { return subsets_; }

    std::size_t size() const noexcept { return solitons_.size(); }
    double max_amplitude() const noexcept { return max_amplitude_; }
    double beta_min() const noexcept;
    double beta_max() const noexcept;
    double speed_max() const noexcept;
    /// sqrt(g / h0), the velocity scale of every field.
    double velocity_scale() const noexcept;
    /// 4 h0^3 / 3
    double hirota_prefactor() const noexcept;
    /// Soliton indices sorted by decreasing amplitude.
    std::vector<std::size_t> descending_order() const;

    friend SolitonSystem build_system(const FluidParams& fluid, std::span<const SolitonSpec> specs);

private:
    SolitonSystem() = default;

    FluidParams fluid_;
    std::vector<SolitonSpec> solitons_;
    std::vector<double> betas_;
    std::vector<double> speeds_;
    std::vector<double> eps_;
    std::vector<SubsetTerm> subsets_;
    double max_amplitude_ = 0.0;
};

SolitonSystem build_system(const FluidParams& fluid, std::span<const SolitonSpec> specs);

inline SolitonSystem build_system(const FluidParams& fluid, std::initializer_list<SolitonSpec> specs) {
    return build_system(fluid, std::span<const SolitonSpec>(specs.begin(), specs.size()));
}

double alpha_pair(double a_k, double a_l);

/// Real surface elevation and x-derivatives.
struct EtaDerivs {
    double eta = 0.0;
    double eta_x = 0.0;
    double eta_xx = 0.0;
};

struct ComplexEtaValue {
    std::complex<double> eta;
    std::complex<double> eta_x;
    std::complex<double> eta_xx;
    /// log-magnitude factored out of F before summation (diagnostic only)
    double scale_log = 0.0;
};

double eval_eta(const SolitonSystem& sys, double x, double t);

/// max_order in [0, 2]; derivatives above max_order are left at zero.
EtaDerivs eval_eta_derivs(const SolitonSystem& sys, double x, double t, int max_order = 2);

/// Analytic continuation eta(x + i y, t). Throws PoleProximity when the
/// renormalized |F| falls below kPoleThreshold and OutOfDomain when |y|
/// exceeds 10 (h0 + max a).
ComplexEtaValue eval_eta_complex(const SolitonSystem& sys, double x, double y, double t,
                                 int max_order = 0);

/// Phase shift of the soliton at position `rank` of `ordering` (an
/// amplitude-descending permutation of soliton indices): the shift it
/// carries once every faster soliton is ahead of it.
double phase_shift(const SolitonSystem& sys, std::size_t rank, std::span<const std::size_t> ordering);
double phase_shift(const SolitonSystem& sys, std::size_t rank);

struct CrestTrack {
    std::size_t soliton = 0;
    double unshifted = 0.0;
    double shifted = 0.0;
};

/// Asymptotic crest positions at time t in amplitude-descending order.
std::vector<CrestTrack> crest_tracks(const SolitonSystem& sys, double t);

/// Asymptotic crest of soliton k at time t accounting for whichever
/// solitons are currently ahead of it on their straight tracks.
double asymptotic_crest(const SolitonSystem& sys, std::size_t k, double t);

namespace detail {

/// Index into sys.subsets() of the dominant term at (x, t), or -1 when the
/// constant term 1 dominates. Ties resolve to the earliest term in
/// lexicographic index order.
int dominant_term(const SolitonSystem& sys, double x, double t) noexcept;

/// Renormalized term: magnitude exp(log_weight) and x-slope after removing
/// the dominant term's linear exponent.
struct ScaledTerm {
    double log_weight;
    double slope;
};

/// All 2^N terms (constant term first) renormalized at (x, t). Returns the
/// log-magnitude removed.
double scaled_terms(const SolitonSystem& sys, double x, double t, std::vector<ScaledTerm>& out);

}  // namespace detail

}  // namespace kdvtraj
