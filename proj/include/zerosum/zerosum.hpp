#pragma once

/// Umbrella header.

#include <zerosum/core.hpp>
#include <zerosum/arithmetic.hpp>
#include <zerosum/special.hpp>
#include <zerosum/quadrature.hpp>
#include <zerosum/testfn.hpp>
#include <zerosum/euler.hpp>
#include <zerosum/lfunctions.hpp>
#include <zerosum/zeros.hpp>
#include <zerosum/explicit_formula.hpp>
#include <zerosum/interpolation.hpp>
#include <zerosum/relations.hpp>
