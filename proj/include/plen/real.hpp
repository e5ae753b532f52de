#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <limits>

namespace plen {

/// 113-bit significand; resolves the 2^-64-sized gaps between heavily
/// wound loops that collapse in double.
using quad = boost::multiprecision::cpp_bin_float_quad;

/// Number of ranked terms of a weighted component sum that can still change
/// the rounded result in `Real`. Terms past this rank are below half an ulp of
/// the running sum, which is at least the first term.
template <typename Real>
inline constexpr int kSumTerms = std::numeric_limits<Real>::digits + 8;

}  // namespace plen
