#pragma once

#include <span>

namespace voronet::geometry {

struct Disk {
    double x = 0.0;
    double y = 0.0;
    double r = 0.0;  // radius >= 0; zero radius means empty interior
};

/// pi r^2.
double disk_area(const Disk& d);

/// Area of the intersection of two disks: 0 when separated, the smaller disk
/// when nested, the two-circle lens otherwise.
double lens_area(const Disk& a, const Disk& b);

/// Area of the union. Exact by inclusion-exclusion for up to three disks
/// (pairwise lenses plus the triple-intersection circular triangle); larger
/// sets, and the rare near-degenerate triples, use adaptive grid refinement
/// with error below abs_tol. The result is clamped to the trivial bounds
/// [max single area, sum of areas].
double union_area(std::span<const Disk> disks);
double union_area(std::span<const Disk> disks, double abs_tol);

namespace detail {

/// Grid-refinement union area, exposed for cross-checking the exact path.
/// Cells entirely inside one disk or outside all disks are classified
/// directly; boundary cells recurse until their total area is below abs_tol.
double union_area_grid(std::span<const Disk> disks, double abs_tol);

/// Intersection of three disks (the inclusion-exclusion correction term).
double triple_intersection_area(const Disk& a, const Disk& b, const Disk& c);

}  // namespace detail

}  // namespace voronet::geometry
