#include "tubelab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tubelab/thicken.hpp"

namespace tubelab {

bool theorem_condition(std::int64_t k, double delta, std::int64_t n_atoms, Dimension d,
                       double epsilon, double C1) {
    if (k <= 0 || n_atoms <= 0 || !(delta > 0.0 && delta < 1.0) || C1 <= 0.0) {
        throw std::invalid_argument("theorem_condition requires positive arguments");
    }
    const double threshold = C1 * std::pow(delta, -epsilon) *
                             std::pow(delta, static_cast<double>(d.value() - 1)) *
                             static_cast<double>(n_atoms);
    return static_cast<double>(k) >= threshold;
}

double theorem_ratio(std::int64_t t_k_count, std::int64_t n_atoms, std::int64_t k) {
    if (n_atoms < 1 || k < 2) {
        throw std::invalid_argument("theorem_ratio requires n_atoms >= 1 and k >= 2");
    }
    const double n = static_cast<double>(n_atoms);
    return static_cast<double>(t_k_count) * std::pow(static_cast<double>(k), 3.0) / (n * n);
}

double k_zero(std::int64_t n_atoms, double delta, Dimension d) {
    return std::max(1.0, std::pow(delta, static_cast<double>(d.value() - 1)) *
                             static_cast<double>(n_atoms));
}

double corollary_bound(std::int64_t n_atoms, std::int64_t n_tubes, double k0) {
    const double a = static_cast<double>(n_atoms);
    const double t = static_cast<double>(n_tubes);
    return std::pow(a, 2.0 / 3.0) * std::pow(t, 2.0 / 3.0) + k0 * t;
}

double dyadic_incidence_bound(const RichnessProfile& profile, std::int64_t n_atoms) {
    const std::int64_t max_r = profile.max_richness();
    if (max_r < 1) return 0.0;
    // Largest implied constant over dyadic levels from 2 (theorem_ratio needs
    // k >= 2); level 1 uses the raw count.
    double c = 0.0;
    for (std::int64_t k = 2; k <= max_r; k *= 2) {
        const std::int64_t tk = profile.count_at_least(k);
        if (tk > 0) c = std::max(c, theorem_ratio(tk, n_atoms, k));
    }
    const double n = static_cast<double>(n_atoms);
    double acc = static_cast<double>(profile.count_at_least(1));
    for (std::int64_t k = 2; k <= max_r; k *= 2) {
        const double tk = static_cast<double>(profile.count_at_least(k));
        const double bound = c * n * n / std::pow(static_cast<double>(k), 3.0);
        acc += static_cast<double>(k) * std::min(tk, bound);
    }
    return acc;
}

PropositionTerms proposition_terms(std::span<const Atom> atoms, std::span<const Tube> tubes,
                                   double S, Dimension d, int workers) {
    PropositionTerms out;
    if (atoms.empty() || tubes.empty()) return out;
    const double delta = tubes[0].width;
    if (!(S == 1.0 || (S > 1.0 && S < 1.0 / delta))) {
        throw std::invalid_argument("thickening scale must be 1 or lie in (1, 1/delta)");
    }

    double sum_w2 = 0.0;
    for (const auto& a : atoms) {
        sum_w2 += static_cast<double>(a.weight) * static_cast<double>(a.weight);
    }
    out.term1 = std::sqrt(S * std::pow(delta, -static_cast<double>(d.value() - 1)) *
                          static_cast<double>(tubes.size()) * sum_w2);

    const auto thick_a = thicken_atoms(atoms, S);
    const auto thick_t = thicken_tubes(tubes, S);
    const std::int64_t thick_i = incidence_count(thick_a.atoms, thick_t.tubes, workers);
    out.term2 = std::pow(S, 1.0 - static_cast<double>(d.value())) *
                static_cast<double>(thick_i);

    out.measured = incidence_count(atoms, tubes, workers);
    return out;
}

ScalingFit fit_scaling(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 3) {
        throw std::invalid_argument("scaling fit requires at least 3 points");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
            throw std::invalid_argument("scaling fit requires strictly positive values");
        }
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("scaling fit requires distinct x values");
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace tubelab
