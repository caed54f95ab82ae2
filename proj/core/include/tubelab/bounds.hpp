#pragma once
/**
 * @file bounds.hpp
 * @brief Evaluation of the incidence inequalities against measured counts:
 * the rich-tube bound and its threshold condition, the incidence-form
 * corollary with its dyadic reconstruction, the two-term thickening bound,
 * and log-log scaling fits.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tubelab/geometry.hpp"
#include "tubelab/incidence.hpp"

namespace tubelab {

/// Threshold condition for the rich-tube bound:
/// k >= C1 * delta^{-epsilon} * delta^{d-1} * n_atoms.
bool theorem_condition(std::int64_t k, double delta, std::int64_t n_atoms, Dimension d,
                       double epsilon, double C1);

/// Implied constant of the rich-tube bound: |T_k| * k^3 / |A|^2.
double theorem_ratio(std::int64_t t_k_count, std::int64_t n_atoms, std::int64_t k);

/// k0 = max(1, delta^{d-1} * |A|), the expected richness of a random tube.
double k_zero(std::int64_t n_atoms, double delta, Dimension d);

/// |A|^{2/3} |T|^{2/3} + k0 |T|.
double corollary_bound(std::int64_t n_atoms, std::int64_t n_tubes, double k0);

/// Sum over dyadic levels k in {1, 2, 4, ...} of k * min(|T_k|, C |A|^2/k^3),
/// with C the largest implied constant in the profile. Level 1 is included so
/// the reconstruction dominates the measured incidence count exactly.
double dyadic_incidence_bound(const RichnessProfile& profile, std::int64_t n_atoms);

struct PropositionTerms {
    double term1 = 0.0;        // (S delta^{-(d-1)} |T| sum w(a)^2)^{1/2}
    double term2 = 0.0;        // S^{1-d} I(A^S, T^S)
    std::int64_t measured = 0; // I(A, T)
};

/// Evaluates both sides of the two-term thickening bound on an atom set and
/// tube set. Throws unless S == 1 or S in (1, 1/delta).
PropositionTerms proposition_terms(std::span<const Atom> atoms, std::span<const Tube> tubes,
                                   double S, Dimension d, int workers = 0);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;  // in log space
    double residual = 0.0;   // RMS residual of log y
};

/// Least-squares line on (log x, log y). Throws on fewer than 3 points or
/// nonpositive values.
ScalingFit fit_scaling(std::span<const double> xs, std::span<const double> ys);

struct BoundReport {
    std::string claim;
    int d = 0;
    double delta = 0.0;
    double W = 0.0;
    std::int64_t k = 0;
    double S = 0.0;
    int D = 0;
    std::uint64_t seed = 0;
    double measured = 0.0;
    double formula = 0.0;
    double constant = 0.0;  // measured / formula
    bool pass = false;
};

}  // namespace tubelab
