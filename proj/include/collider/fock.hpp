// fock.hpp - truncated bosonic modes and two-mode squeezed thermal states

#pragma once

#include <stdexcept>

#include "collider/operator.hpp"

namespace collider::fock {

class CutoffInsufficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest tolerated thermal tail weight beyond the cutoff.
inline constexpr double kTailTolerance = 1e-10;

struct FockMode {
  int cutoff = 1;  // n_max; the mode has cutoff + 1 levels

  explicit FockMode(int n_max);
  int dim() const { return cutoff + 1; }
  HilbertDims dims() const { return HilbertDims({dim()}); }
};

struct SqueezeParams {
  double r = 0.0;
  double psi = 0.0;

  SqueezeParams() = default;
  SqueezeParams(double magnitude, double phase);
  cplx zeta() const { return std::polar(r, psi); }
};

// An operator together with the size of the error introduced by truncating
// the Fock space (unitarity defect or population at the cutoff).
struct Truncated {
  Operator op;
  double truncation_defect = 0.0;
};

// (N/(N+1))^(n_max+1): weight a thermal state of mean number N puts beyond n_max.
double thermal_tail(double mean_number, int cutoff);

// Smallest n_max with thermal tail <= 1e-10 for both modes' marginal
// occupations after squeezing, and n_max >= 10 * max(1, sinh^2 r).
int default_cutoff(double n1, double n2, const SqueezeParams& zeta);

Operator annihilation(const FockMode& mode);
Operator creation(const FockMode& mode);
Operator number(const FockMode& mode);

Truncated thermal_state(const FockMode& mode, double mean_number);

// S(zeta) = exp(zeta b1^dag b2^dag - zeta^* b1 b2) on the two-mode space.
Truncated two_mode_squeeze(const FockMode& m1, const FockMode& m2, const SqueezeParams& zeta);

// Generator G with S(zeta) = exp(-i r G): G = i (e^{i psi} b1^dag b2^dag - h.c.).
Operator squeeze_generator(const FockMode& m1, const FockMode& m2, double psi);

// S(zeta) rho_th(N1) (x) rho_th(N2) S(zeta)^dag.
Truncated entangled_thermal_state(const FockMode& m1, const FockMode& m2, const SqueezeParams& zeta,
                                  double n1, double n2);

}  // namespace collider::fock
