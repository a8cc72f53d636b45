#pragma once

/**
 * @file cliffbvp.hpp
 * @brief Umbrella header: numerical Clifford analysis and Hilbert/Schwarz/
 *        Riemann boundary value problems on the Poincare upper half space.
 */

#include "multivector.hpp"
#include "monogenic.hpp"
#include "boundary_expr.hpp"
#include "quadrature.hpp"
#include "solvers.hpp"
#include "problem_io.hpp"
