#pragma once

#include <optional>
#include <vector>

#include "spinent/geometry.hpp"
#include "spinent/majorana.hpp"

namespace spinent {

/// Point group of a constellation.  For collinear configurations (including
/// all stars co-located) rotations about the star axis form a continuum;
/// `continuous` is set and order / proper_order count only the finite part
/// modulo those axial rotations: a perpendicular flip when the two polar
/// clusters can be exchanged, and a reflection through a plane containing
/// the axis, which is always present.
struct PointGroupReport {
    bool continuous = false;
    int order = 1;
    int proper_order = 1;
    std::vector<Mat3> generators;
    std::vector<Mat3> elements;
};

/// Enumerates candidate rotation axes (star directions, pairwise sums and
/// cross products, triple sums for small constellations), tests rotations
/// by 2*pi/n for n <= 2S+2 together with their rotoinversions, and closes
/// the accepted operations into a group.  Multisets are compared by optimal
/// assignment with chordal distance at most tol.
PointGroupReport detect_point_group(const Constellation& c, double tol = 1e-5);

/// A proper rotation carrying a onto b within tol, if one exists.
std::optional<Rotation> match_constellations(const Constellation& a, const Constellation& b,
                                             double tol = 1e-6);

}  // namespace spinent
