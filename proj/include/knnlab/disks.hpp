#pragma once

#include "knnlab/region.hpp"

namespace knnlab::geom {

// area of D(0,r1) ∩ D((d,0),r2)
double disk_lens_area(double d, double r1, double r2);

bool disk_inside_disk(const Disk& a, const Disk& b);
// a ⊆ p ∪ q
bool disk_covered_by_union(const Disk& a, const Disk& p, const Disk& q);
// a ∩ b ⊆ target
bool lens_inside_disk(const Disk& a, const Disk& b, const Disk& target);

}  // namespace knnlab::geom
