#include "tubelab/serialize.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tubelab {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atoms(std::ostream& os, std::span<const Atom> atoms, Dimension d, double delta) {
    os << d.value() << ' ' << format_real(delta) << ' ' << atoms.size() << '\n';
    for (const auto& a : atoms) {
        for (int i = 0; i < d; ++i) os << format_real(a.center[i]) << ' ';
        os << a.weight << '\n';
    }
}

std::vector<Atom> read_atoms(std::istream& is) {
    int d = 0;
    double delta = 0.0;
    std::size_t n = 0;
    if (!(is >> d >> delta >> n)) throw std::runtime_error("bad atom file header");
    Dimension dim(d);
    std::vector<Atom> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec c(d);
        std::int64_t w = 0;
        for (int j = 0; j < d; ++j) {
            if (!(is >> c[j])) throw std::runtime_error("bad atom line");
        }
        if (!(is >> w)) throw std::runtime_error("bad atom line");
        atoms.push_back(make_atom(c, delta, w));
    }
    return atoms;
}

void write_tubes(std::ostream& os, std::span<const Tube> tubes, Dimension d, double delta,
                 double offset_spacing) {
    os << d.value() << ' ' << format_real(delta) << ' ' << format_real(offset_spacing) << ' '
       << tubes.size() << '\n';
    for (const auto& t : tubes) {
        for (int i = 0; i < d; ++i) os << format_real(t.direction[i]) << ' ';
        for (int i = 0; i < d; ++i) os << format_real(t.anchor[i]) << ' ';
        os << t.weight << '\n';
    }
}

std::vector<Tube> read_tubes(std::istream& is) {
    int d = 0;
    double delta = 0.0, spacing = 0.0;
    std::size_t n = 0;
    if (!(is >> d >> delta >> spacing >> n)) throw std::runtime_error("bad tube file header");
    Dimension dim(d);
    std::vector<Tube> tubes;
    tubes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec u(d), anchor(d);
        std::int64_t w = 0;
        for (int j = 0; j < d; ++j) {
            if (!(is >> u[j])) throw std::runtime_error("bad tube line");
        }
        for (int j = 0; j < d; ++j) {
            if (!(is >> anchor[j])) throw std::runtime_error("bad tube line");
        }
        if (!(is >> w)) throw std::runtime_error("bad tube line");
        // The stored values are already canonical: keep them bit-exact.
        tubes.push_back(Tube{Direction::from_unit(u), anchor, delta, w});
    }
    return tubes;
}

void write_profile_csv(std::ostream& os, const RichnessProfile& profile) {
    os << "k,count\n";
    for (std::int64_t k = profile.max_richness(); k >= 1; --k) {
        os << k << ',' << profile.count_at_least(k) << '\n';
    }
}

void write_tubechens_csv(std::ostream& os, std::span<const Tubechen> tubechens) {
    os << "tube_id,cell_id,w,m\n";
    for (const auto& tc : tubechens) {
        os << tc.tube_id << ',' << tc.cell_id << ',' << tc.weight << ',' << tc.multiplicity
           << '\n';
    }
}

void write_bound_reports_csv(std::ostream& os, std::span<const BoundReport> reports) {
    os << "claim,d,delta,W,k,S,D,seed,measured,formula,constant,pass\n";
    for (const auto& r : reports) {
        os << r.claim << ',' << r.d << ',' << format_real(r.delta) << ',' << format_real(r.W)
           << ',' << r.k << ',' << format_real(r.S) << ',' << r.D << ',' << r.seed << ','
           << format_real(r.measured) << ',' << format_real(r.formula) << ','
           << format_real(r.constant) << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

}  // namespace tubelab
