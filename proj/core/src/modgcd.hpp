#pragma once

#include "arfinsler/mpoly.hpp"

namespace arf::detail {

/// GCD of two nonconstant polynomials with coprime integer coefficients, by
/// dense evaluation and interpolation modulo word-size primes combined with
/// the Chinese remainder theorem. The result is primitive over Z.
MPoly modular_gcd(const MPoly& a, const MPoly& b);

}  // namespace arf::detail
