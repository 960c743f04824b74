#pragma once

// Discretization of linear fractional-order systems D^alpha x = A x + f with
// odd-rational order alpha = (2p+1)/(2q+1): the approximate Grunwald-Letnikov
// transition recursion and the exact per-interval fundamental matrices, plus
// the comparison harness.

#include "fracdisc/errors.hpp"
#include "fracdisc/rational.hpp"
#include "fracdisc/matrix.hpp"
#include "fracdisc/special.hpp"
#include "fracdisc/linalg.hpp"
#include "fracdisc/mittag_leffler.hpp"
#include "fracdisc/quadrature.hpp"
#include "fracdisc/frac_order.hpp"
#include "fracdisc/problem.hpp"
#include "fracdisc/problem_io.hpp"
#include "fracdisc/gl.hpp"
#include "fracdisc/exact.hpp"
#include "fracdisc/report.hpp"
#include "fracdisc/example1.hpp"
