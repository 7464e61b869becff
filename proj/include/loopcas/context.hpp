#ifndef LOOPCAS_CONTEXT_HPP
#define LOOPCAS_CONTEXT_HPP

#include "loopcas/errors.hpp"

namespace loopcas {

// Global finite-precision policy. B-modes live in [-neg_window, pos_window];
// monomials of degree >= nilpotency in negative B-modes are zero. Treated as
// immutable: every operation takes it by const reference and records nothing
// back into it.
struct TruncationContext {
  int charts = 1;        // N >= 1
  int neg_window = 0;    // M >= 0, retained modes n >= -M
  int pos_window = 0;    // L >= 0, retained modes n <= L
  int nilpotency = 1;    // epsilon >= 1
  int weight_bound = 0;  // W >= 0 (Heisenberg states, where enforced)
  int b0_cap = 0;        // cap on b_0-degree in basis enumeration

  void validate() const {
    if (charts < 1) raise(Errc::BadArgument, "charts must be >= 1");
    if (neg_window < 0 || pos_window < 0) raise(Errc::BadArgument, "window bounds must be >= 0");
    if (nilpotency < 1) raise(Errc::BadArgument, "nilpotency must be >= 1");
    if (weight_bound < 0) raise(Errc::BadArgument, "weight bound must be >= 0");
    if (b0_cap < 0) raise(Errc::BadArgument, "b0 cap must be >= 0");
  }
};

}  // namespace loopcas

#endif
