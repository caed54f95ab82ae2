#pragma once
/**
 * @file serialize.hpp
 * @brief Line-oriented text formats for atom sets and tube families, and the
 * CSV emitters for profiles, tubechen tables and bound reports. Decimal
 * values are written with 17 significant digits so round-trips are exact.
 */

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tubelab/bounds.hpp"
#include "tubelab/cell_partition.hpp"
#include "tubelab/geometry.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/tube_family.hpp"

namespace tubelab {

/// Formats a double with 17 significant digits.
std::string format_real(double v);

/// Header `d delta n`, then one atom per line: `x1 ... xd weight`.
void write_atoms(std::ostream& os, std::span<const Atom> atoms, Dimension d, double delta);
std::vector<Atom> read_atoms(std::istream& is);

/// Header `d delta offset_spacing n`, then per line:
/// `dir_1 ... dir_d anchor_1 ... anchor_d weight`.
void write_tubes(std::ostream& os, std::span<const Tube> tubes, Dimension d, double delta,
                 double offset_spacing);
std::vector<Tube> read_tubes(std::istream& is);

/// CSV `k,count` rows, descending k from the maximum richness to 1.
void write_profile_csv(std::ostream& os, const RichnessProfile& profile);

/// CSV `tube_id,cell_id,w,m`.
void write_tubechens_csv(std::ostream& os, std::span<const Tubechen> tubechens);

/// CSV `claim,d,delta,W,k,S,D,seed,measured,formula,constant,pass`.
void write_bound_reports_csv(std::ostream& os, std::span<const BoundReport> reports);

}  // namespace tubelab
