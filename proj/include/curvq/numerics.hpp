#pragma once

#include "curvq/error.hpp"
#include "curvq/numerics/bessel.hpp"
#include "curvq/numerics/interpolation.hpp"
#include "curvq/numerics/quadrature.hpp"
#include "curvq/numerics/roots.hpp"
#include "curvq/numerics/tridiagonal.hpp"
