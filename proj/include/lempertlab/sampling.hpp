#pragma once

#include <random>

#include "lempertlab/automorphisms.hpp"

namespace lempertlab {

using Rng = std::mt19937_64;

cplx random_in_disc(Rng& rng, double radius = 1.0);
cplx random_unimodular(Rng& rng);
Point random_polydisc(int n, Rng& rng, double radius = 1.0);
Point random_gaussian(int n, Rng& rng);

// rejection from the polydisc for n <= 4, gauge-radial samples above (not uniform)
Point random_lhat(int n, Rng& rng);
Point random_lie_ball(int n, Rng& rng);
Point random_tetra(Rng& rng);
Point random_point(DomainKind k, int n, Rng& rng);

Eigen::MatrixXd random_rotation(int n, Rng& rng);
// product of rotations and boosts with rapidities up to max_rapidity
GroupElement random_group_element(int n, Rng& rng, double max_rapidity = 1.5);
TetraMobius random_tetra_mobius(Rng& rng, double max_modulus = 0.9);

}  // namespace lempertlab
