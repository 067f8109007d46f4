#include "kdvtraj/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kdvtraj/error.hpp"

namespace kdvtraj {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// exp() underflows to zero below this; such terms contribute nothing.
constexpr double kUnderflowLog = -745.0;

double log_alpha_pair(double a_k, double a_l) {
    const double rk = std::sqrt(a_k);
    const double rl = std::sqrt(a_l);
    const double ratio = std::abs(rk - rl) / (rk + rl);
    return ratio > 0.0 ? 2.0 * std::log(ratio) : kNegInf;
}

// Subsets in lexicographic order of their sorted index lists, so the first
// maximum found during a scan is the lexicographically smallest one.
void enumerate_subsets(std::size_t n, const std::vector<double>& betas,
                       const std::vector<double>& speeds, const std::vector<SolitonSpec>& specs,
                       const std::vector<std::vector<double>>& log_pair, std::vector<SubsetTerm>& out) {
    std::vector<std::size_t> stack;
    stack.reserve(n);
    // Depth-first: extend the current set by each larger index.
    auto visit = [&](auto&& self, const SubsetTerm& parent, std::size_t first) -> void {
        for (std::size_t j = first; j < n; ++j) {
            SubsetTerm term = parent;
            term.mask |= (std::uint32_t{1} << j);
            for (std::size_t k : stack) term.log_alpha += log_pair[k][j];
            term.beta_sum += betas[j];
            term.phase_offset += 2.0 * betas[j] * specs[j].phase;
            term.speed_offset += 2.0 * betas[j] * speeds[j];
            term.alpha = std::exp(term.log_alpha);
            out.push_back(term);
            stack.push_back(j);
            self(self, term, j + 1);
            stack.pop_back();
        }
    };
    SubsetTerm root;
    root.mask = 0;
    root.log_alpha = 0.0;
    visit(visit, root, 0);
}

template <typename Scalar>
struct Cumulants {
    Scalar c2{}, c3{}, c4{};
    Scalar sum{};  // renormalized F
    double scale_log = 0.0;
};

// Derivatives of ln F of order 2..4 are the cumulants of the slope
// distribution weighted by term / F. Centering on the mean slope keeps the
// sums free of cancellation in the far field.
template <typename Scalar>
Cumulants<Scalar> log_f_cumulants(const SolitonSystem& sys, double x, double y, double t,
                                  int max_order, std::vector<detail::ScaledTerm>& terms) {
    Cumulants<Scalar> out;
    out.scale_log = detail::scaled_terms(sys, x, t, terms);

    std::vector<Scalar> values;
    values.reserve(terms.size());
    Scalar sum{};
    for (const auto& term : terms) {
        Scalar v;
        if (term.log_weight < kUnderflowLog) {
            v = Scalar{};
        } else if constexpr (std::is_same_v<Scalar, double>) {
            v = std::exp(term.log_weight);
        } else {
            v = std::polar(std::exp(term.log_weight), term.slope * y);
        }
        values.push_back(v);
        sum += v;
    }
    out.sum = sum;
    if (std::abs(sum) < kPoleThreshold) {
        std::ostringstream msg;
        msg << "renormalized |F| = " << std::abs(sum) << " at x=" << x << " y=" << y << " t=" << t;
        throw Error(ErrorCode::PoleProximity, msg.str());
    }

    Scalar mean{};
    for (std::size_t i = 0; i < terms.size(); ++i) {
        values[i] /= sum;
        mean += values[i] * terms[i].slope;
    }
    Scalar m2{}, m3{}, m4{};
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Scalar d = terms[i].slope - mean;
        const Scalar wd2 = values[i] * d * d;
        m2 += wd2;
        if (max_order >= 1) m3 += wd2 * d;
        if (max_order >= 2) m4 += wd2 * d * d;
    }
    out.c2 = m2;
    out.c3 = m3;
    out.c4 = m4 - Scalar(3.0) * m2 * m2;
    return out;
}

void check_order(int max_order) {
    if (max_order < 0 || max_order > 2) {
        throw Error(ErrorCode::InvalidArgument, "max_order must be in [0, 2]");
    }
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveFluidParam: return "NonPositiveFluidParam";
        case ErrorCode::NonPositiveAmplitude: return "NonPositiveAmplitude";
        case ErrorCode::EqualAmplitudes: return "EqualAmplitudes";
        case ErrorCode::TooManySolitons: return "TooManySolitons";
        case ErrorCode::EmptySystem: return "EmptySystem";
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::BadPermutation: return "BadPermutation";
        case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
        case ErrorCode::ParticleInInteraction: return "ParticleInInteraction";
        case ErrorCode::ConditionNotMet: return "ConditionNotMet";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

// -----------------------------------------------------------------------------
// SubsetTerm / SolitonSystem
// -----------------------------------------------------------------------------

std::vector<std::size_t> SubsetTerm::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 32; ++i) {
        if (mask & (std::uint32_t{1} << i)) out.push_back(i);
    }
    return out;
}

double SolitonSystem::beta_min() const noexcept { return *std::min_element(betas_.begin(), betas_.end()); }
double SolitonSystem::beta_max() const noexcept { return *std::max_element(betas_.begin(), betas_.end()); }
double SolitonSystem::speed_max() const noexcept { return *std::max_element(speeds_.begin(), speeds_.end()); }
double SolitonSystem::velocity_scale() const noexcept { return std::sqrt(fluid_.g / fluid_.h0); }
double SolitonSystem::hirota_prefactor() const noexcept {
    return 4.0 * fluid_.h0 * fluid_.h0 * fluid_.h0 / 3.0;
}

std::vector<std::size_t> SolitonSystem::descending_order() const {
    std::vector<std::size_t> order(solitons_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        return solitons_[a].amplitude > solitons_[b].amplitude;
    });
    return order;
}

SolitonSystem build_system(const FluidParams& fluid, std::span<const SolitonSpec> specs) {
    if (!(fluid.h0 > 0.0) || !(fluid.g > 0.0) || !std::isfinite(fluid.h0) || !std::isfinite(fluid.g)) {
        throw Error(ErrorCode::NonPositiveFluidParam, "h0 and g must be positive and finite");
    }
    if (specs.empty()) throw Error(ErrorCode::EmptySystem, "at least one soliton is required");
    if (specs.size() > kMaxSolitons) {
        throw Error(ErrorCode::TooManySolitons, "N = " + std::to_string(specs.size()) + " exceeds the cap of " +
                                                    std::to_string(kMaxSolitons));
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!(specs[i].amplitude > 0.0) || !std::isfinite(specs[i].amplitude)) {
            throw Error(ErrorCode::NonPositiveAmplitude, "soliton " + std::to_string(i) + " has amplitude <= 0");
        }
        if (!std::isfinite(specs[i].phase)) {
            throw Error(ErrorCode::InvalidArgument, "soliton " + std::to_string(i) + " has a non-finite phase");
        }
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (std::size_t j = i + 1; j < specs.size(); ++j) {
            const double ai = specs[i].amplitude;
            const double aj = specs[j].amplitude;
            if (std::abs(ai - aj) / std::max(ai, aj) <= kEqualAmplitudeTolerance) {
                throw Error(ErrorCode::EqualAmplitudes,
                            "solitons " + std::to_string(i) + " and " + std::to_string(j) + " have equal amplitudes");
            }
        }
    }

    SolitonSystem sys;
    sys.fluid_ = fluid;
    sys.solitons_.assign(specs.begin(), specs.end());
    const std::size_t n = specs.size();
    const double h0 = fluid.h0;
    for (const auto& s : specs) {
        sys.betas_.push_back(std::sqrt(3.0 * s.amplitude / (4.0 * h0 * h0 * h0)));
        sys.speeds_.push_back(std::sqrt(fluid.g * h0) * (1.0 + s.amplitude / (2.0 * h0)));
        sys.eps_.push_back(s.amplitude / h0);
        sys.max_amplitude_ = std::max(sys.max_amplitude_, s.amplitude);
    }

    std::vector<std::vector<double>> log_pair(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
            log_pair[k][l] = log_pair[l][k] = log_alpha_pair(specs[k].amplitude, specs[l].amplitude);
        }
    }
    sys.subsets_.reserve((std::size_t{1} << n) - 1);
    enumerate_subsets(n, sys.betas_, sys.speeds_, sys.solitons_, log_pair, sys.subsets_);
    return sys;
}

double alpha_pair(double a_k, double a_l) {
    if (!(a_k > 0.0) || !(a_l > 0.0)) {
        throw Error(ErrorCode::NonPositiveAmplitude, "alpha_pair requires positive amplitudes");
    }
    const double rk = std::sqrt(a_k);
    const double rl = std::sqrt(a_l);
    const double r = (rk - rl) / (rk + rl);
    return r * r;
}

// -----------------------------------------------------------------------------
// Renormalized term table
// -----------------------------------------------------------------------------

namespace detail {

int dominant_term(const SolitonSystem& sys, double x, double t) noexcept {
    int best = -1;
    double best_log = 0.0;  // constant term
    const auto subsets = sys.subsets();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto& s = subsets[i];
        const double lw = s.log_alpha + s.exponent_slope_x() * x + s.exponent_offset(t);
        if (lw > best_log) {
            best_log = lw;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double scaled_terms(const SolitonSystem& sys, double x, double t, std::vector<ScaledTerm>& out) {
    const auto subsets = sys.subsets();
    out.resize(subsets.size() + 1);
    out[0] = {0.0, 0.0};
    double best_log = 0.0;
    double best_slope = 0.0;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto& s = subsets[i];
        const double slope = s.exponent_slope_x();
        const double lw = s.log_alpha + slope * x + s.exponent_offset(t);
        out[i + 1] = {lw, slope};
        if (lw > best_log) {
            best_log = lw;
            best_slope = slope;
        }
    }
    for (auto& term : out) {
        term.log_weight -= best_log;
        term.slope -= best_slope;
    }
    return best_log;
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Surface evaluation
// -----------------------------------------------------------------------------

double eval_eta(const SolitonSystem& sys, double x, double t) {
    return eval_eta_derivs(sys, x, t, 0).eta;
}

EtaDerivs eval_eta_derivs(const SolitonSystem& sys, double x, double t, int max_order) {
    check_order(max_order);
    thread_local std::vector<detail::ScaledTerm> terms;
    const auto c = log_f_cumulants<double>(sys, x, 0.0, t, max_order, terms);
    const double k = sys.hirota_prefactor();
    EtaDerivs out;
    out.eta = k * c.c2;
    if (max_order >= 1) out.eta_x = k * c.c3;
    if (max_order >= 2) out.eta_xx = k * c.c4;
    return out;
}

ComplexEtaValue eval_eta_complex(const SolitonSystem& sys, double x, double y, double t, int max_order) {
    check_order(max_order);
    const double limit = 10.0 * (sys.fluid().h0 + sys.max_amplitude());
    if (!(std::abs(y) <= limit)) {
        throw Error(ErrorCode::OutOfDomain, "|y| exceeds 10 (h0 + max a)");
    }
    thread_local std::vector<detail::ScaledTerm> terms;
    const auto c = log_f_cumulants<std::complex<double>>(sys, x, y, t, max_order, terms);
    const double k = sys.hirota_prefactor();
    ComplexEtaValue out;
    out.scale_log = c.scale_log;
    out.eta = k * c.c2;
    if (max_order >= 1) out.eta_x = k * c.c3;
    if (max_order >= 2) out.eta_xx = k * c.c4;
    return out;
}

// -----------------------------------------------------------------------------
// Phase shifts and crest tracks
// -----------------------------------------------------------------------------

double phase_shift(const SolitonSystem& sys, std::size_t rank, std::span<const std::size_t> ordering) {
    const std::size_t n = sys.size();
    if (ordering.size() != n) throw Error(ErrorCode::BadPermutation, "ordering length differs from N");
    std::vector<bool> seen(n, false);
    for (std::size_t idx : ordering) {
        if (idx >= n || seen[idx]) throw Error(ErrorCode::BadPermutation, "ordering is not a permutation");
        seen[idx] = true;
    }
    const auto solitons = sys.solitons();
    for (std::size_t i = 1; i < n; ++i) {
        if (!(solitons[ordering[i - 1]].amplitude > solitons[ordering[i]].amplitude)) {
            throw Error(ErrorCode::BadPermutation, "ordering is not amplitude-descending");
        }
    }
    if (rank >= n) throw Error(ErrorCode::BadPermutation, "rank out of range");

    const std::size_t k = ordering[rank];
    double log_prod = 0.0;
    for (std::size_t i = 0; i < rank; ++i) {
        log_prod += log_alpha_pair(solitons[ordering[i]].amplitude, solitons[k].amplitude);
    }
    return log_prod / (2.0 * sys.betas()[k]);
}

double phase_shift(const SolitonSystem& sys, std::size_t rank) {
    const auto order = sys.descending_order();
    return phase_shift(sys, rank, order);
}

std::vector<CrestTrack> crest_tracks(const SolitonSystem& sys, double t) {
    const auto order = sys.descending_order();
    std::vector<CrestTrack> out;
    out.reserve(order.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const std::size_t k = order[rank];
        const double base = sys.solitons()[k].phase + sys.speeds()[k] * t;
        out.push_back({k, base, base + phase_shift(sys, rank, order)});
    }
    return out;
}

double asymptotic_crest(const SolitonSystem& sys, std::size_t k, double t) {
    const auto solitons = sys.solitons();
    const double own = solitons[k].phase + sys.speeds()[k] * t;
    double log_prod = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (i == k) continue;
        const double other = solitons[i].phase + sys.speeds()[i] * t;
        if (other > own) log_prod += log_alpha_pair(solitons[i].amplitude, solitons[k].amplitude);
    }
    return own + log_prod / (2.0 * sys.betas()[k]);
}

}  // namespace kdvtraj
