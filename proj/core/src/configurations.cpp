#include "tubelab/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tubelab/rng.hpp"

namespace tubelab {

std::string to_string(ConfigTag tag) {
    switch (tag) {
        case ConfigTag::kWellSpacedGrid: return "wellspaced-grid";
        case ConfigTag::kCornerGrid: return "corner-grid";
        case ConfigTag::kBoxExample: return "box-example";
        case ConfigTag::kSliceExample: return "slice-example";
        case ConfigTag::kUniformRandom: return "uniform-random";
    }
    return "unknown";
}

std::vector<Atom> gen_wellspaced_grid(const WellSpacedParams& p) {
    if (!(p.W > 1.0)) throw std::invalid_argument("wellspaced grid requires W > 1");
    if (!(p.delta > 0.0 && p.delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
    if (!(p.delta < 1.0 / p.W)) {
        throw std::invalid_argument("wellspaced grid requires delta < 1/W");
    }
    if (!(p.jitter >= 0.0 && p.jitter < 1.0)) {
        throw std::invalid_argument("jitter must lie in [0, 1)");
    }
    const int d = p.d;
    const int side = static_cast<int>(std::floor(p.W));
    const double cell = 1.0 / p.W;
    // Maximal displacement keeping the closed ball inside its cell.
    const double max_disp = (cell - p.delta) / 2.0;

    Rng rng(p.seed);
    std::vector<Atom> atoms;
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= side;
    atoms.reserve(static_cast<std::size_t>(count));

    std::array<int, kMaxDim> idx{};
    for (std::int64_t n = 0; n < count; ++n) {
        Vec c(d);
        for (int i = 0; i < d; ++i) {
            double off = p.jitter * max_disp * (2.0 * rng.next_double() - 1.0);
            c[i] = (idx[static_cast<std::size_t>(i)] + 0.5) * cell + off;
        }
        atoms.push_back(make_atom(c, p.delta));
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < side) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return atoms;
}

std::vector<Atom> gen_corner_grid(int k, double delta) {
    return gen_box_example(k, delta, Dimension(2));
}

std::vector<Atom> gen_box_example(int k, double delta, Dimension d) {
    if (k < 1) throw std::invalid_argument("box example requires k >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(k * delta < 1.0)) throw std::invalid_argument("box example requires k*delta < 1");
    const int dim = d;
    std::vector<Atom> atoms;
    std::int64_t count = 1;
    for (int i = 0; i < dim; ++i) count *= k;
    atoms.reserve(static_cast<std::size_t>(count));
    std::array<int, kMaxDim> idx{};
    for (std::int64_t n = 0; n < count; ++n) {
        Vec c(dim);
        for (int i = 0; i < dim; ++i) c[i] = (idx[static_cast<std::size_t>(i)] + 0.5) * delta;
        atoms.push_back(make_atom(c, delta));
        for (int i = dim - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < k) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return atoms;
}

std::vector<Atom> gen_slice_example(int k, double delta, Dimension d) {
    if (k < 1) throw std::invalid_argument("slice example requires k >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(k * delta < 1.0)) throw std::invalid_argument("slice example requires k*delta < 1");
    const int dim = d;
    std::vector<Atom> atoms;
    std::int64_t count = 1;
    for (int i = 1; i < dim; ++i) count *= k;
    atoms.reserve(static_cast<std::size_t>(count));
    std::array<int, kMaxDim> idx{};
    for (std::int64_t n = 0; n < count; ++n) {
        Vec c(dim);
        c[0] = delta / 2.0;
        for (int i = 1; i < dim; ++i) c[i] = (idx[static_cast<std::size_t>(i)] + 0.5) * delta;
        atoms.push_back(make_atom(c, delta));
        for (int i = dim - 1; i >= 1; --i) {
            if (++idx[static_cast<std::size_t>(i)] < k) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return atoms;
}

std::vector<Atom> gen_uniform_random(std::int64_t n, double delta, Dimension d,
                                     std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("atom count must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    Rng rng(seed);
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(n));
    const double lo = delta / 2.0;
    const double hi = 1.0 - delta / 2.0;
    for (std::int64_t i = 0; i < n; ++i) {
        Vec c(d);
        for (int j = 0; j < d; ++j) c[j] = rng.uniform(lo, hi);
        atoms.push_back(make_atom(c, delta));
    }
    return atoms;
}

double two_rich_sum(std::span<const Atom> atoms, Dimension d) {
    if (atoms.size() < 2) {
        throw std::invalid_argument("two_rich_sum requires at least two atoms");
    }
    const double delta = atoms[0].diameter;
    const double expo = static_cast<double>(d.value() - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            double dist = std::max(distance(atoms[i].center, atoms[j].center), delta);
            acc += std::pow(dist, -expo);
        }
    }
    return acc;
}

}  // namespace tubelab
