#pragma once

#include <cstddef>

#include "multider/exact_poly.hpp"

namespace multider {

/// m!, from a process-wide table that grows on demand. The reference stays
/// valid for the life of the process.
const Integer& factorial(std::size_t m);

/// Simple Laguerre polynomial of degree a: coefficient of x^k is
/// (-1)^k C(a, k) / k!. Results are cached process-wide.
const Poly& laguerre(unsigned a);

/// The functional p -> integral_0^inf e^(-x) p(x) dx, evaluated exactly as
/// sum_m p_m * m!.
Rational exp_moment(const Poly& p);

}  // namespace multider
