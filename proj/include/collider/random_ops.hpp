// random_ops.hpp - seeded random operators for property tests and random-spec experiments

#pragma once

#include <random>

#include "collider/collision.hpp"
#include "collider/gkls.hpp"

namespace collider {

using Rng = std::mt19937_64;

// Entries with independent standard normal real and imaginary parts.
Matrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Operator random_hermitian(const HilbertDims& dims, Rng& rng);
Operator random_density(const HilbertDims& dims, Rng& rng);
// Random pure state |psi><psi|.
Operator random_pure(const HilbertDims& dims, Rng& rng);

// A A^dag with A square Gaussian, scaled so the largest eigenvalue is `scale`.
Matrix random_psd(Eigen::Index n, Rng& rng, double scale = 1.0);

// Random valid GKLS spec on the given basis: Hermitian H_eff and PSD Kossakowski.
GklsSpec random_gkls(const GksBasis& basis, Rng& rng);

// Two-qubit ancilla state that is a mixture of parity-definite states, so
// every single-ancilla odd operator has zero mean on it.
AncillaPrep random_parity_prep(Rng& rng);

}  // namespace collider
