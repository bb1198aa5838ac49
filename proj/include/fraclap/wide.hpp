#pragma once

#include <quadmath.h>

#include <cstddef>
#include <vector>

namespace fraclap {
namespace detail {

/// Extended-precision scalar used inside the assembly kernels and the
/// accuracy-critical accumulations. 113-bit mantissa; differences and
/// products of doubles are exact in this type.
using wide = __float128;

/// x^e for x >= 0 with the x = 0 case returned as exactly 0.
inline wide wide_pow(wide x, wide e) {
    if (x == 0)
        return 0;
    return expq(e * logq(x));
}

/// a^e - b^e for a, b >= 0 and e > 0, computed without subtractive
/// cancellation. Direct subtraction loses accuracy when a and b are
/// close but far from zero (the difference can be smaller than the
/// rounding of either power); routing through log1p/expm1 keeps the
/// error relative to the difference itself. The ratio is formed from
/// the correctly rounded subtraction small - big rather than from
/// small/big, whose rounding near 1 would reintroduce the same
/// absolute-level noise.
inline wide wide_pow_diff(wide a, wide b, wide e) {
    if (a == b)
        return 0;
    if (a == 0)
        return -wide_pow(b, e);
    if (b == 0)
        return wide_pow(a, e);
    const bool swapped = a < b;
    const wide big = swapped ? b : a;
    const wide small = swapped ? a : b;
    const wide diff = -wide_pow(big, e) * expm1q(e * log1pq((small - big) / big));
    return swapped ? -diff : diff;
}

/// Sum of a double array accumulated in extended precision.
inline double wide_sum(const double* v, std::size_t n) {
    wide acc = 0;
    for (std::size_t k = 0; k < n; ++k)
        acc += static_cast<wide>(v[k]);
    return static_cast<double>(acc);
}

/// Dot product of two double arrays accumulated in extended precision.
/// Each elementwise product is exact (53 + 53 bits fit in the mantissa),
/// so the result is correct to a rounding of the true sum.
inline double wide_dot(const double* a, const double* b, std::size_t n) {
    wide acc = 0;
    for (std::size_t k = 0; k < n; ++k)
        acc += static_cast<wide>(a[k]) * static_cast<wide>(b[k]);
    return static_cast<double>(acc);
}

}  // namespace detail
}  // namespace fraclap
