// mpoc — deterministic low-discrepancy sampling and polynomial bases shared
// by the fitting and verification modules.
#ifndef MPOC_SAMPLING_HPP
#define MPOC_SAMPLING_HPP

#include <vector>

#include "mpoc/model.hpp"

namespace mpoc {

/// Radical-inverse (van der Corput) value of `index` in the given base.
double radical_inverse(unsigned long long index, unsigned base);

/// Point `index` of the Halton sequence mapped into the box (bases are the
/// first dim() primes; indices start at 1).  A seed enters as an index
/// offset, keeping the sequence deterministic per seed.
Vector halton_point(unsigned long long index, const Box& box);

/// All exponent tuples of total degree ≤ degree in n variables, in graded
/// lexicographic order (constant term first; 20 tuples for n = 3,
/// degree = 3).
std::vector<std::vector<int>> monomial_exponents(int n, int degree);

/// Evaluate one monomial at x.
double eval_monomial(const std::vector<int>& exponents, const Vector& x);

/// Dense design matrix: rows are points, columns the monomial basis.
Matrix monomial_design(const std::vector<Vector>& points,
                       const std::vector<std::vector<int>>& basis);

}  // namespace mpoc

#endif  // MPOC_SAMPLING_HPP
