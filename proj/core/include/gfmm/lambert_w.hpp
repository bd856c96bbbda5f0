#pragma once

namespace gfmm {

/// Principal branch W0 of the inverse of w -> w e^w, for x >= -1/e.
/// Halley iteration from a branch-point series (x near -1/e), a Taylor guess
/// (|x| small) or a logarithmic guess (x > 0.3); at most 50 iterations.
/// Throws DomainError below -1/e, NumericError if the iteration stalls.
double lambert_w0(double x);

}  // namespace gfmm
