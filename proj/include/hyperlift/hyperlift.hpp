#pragma once

#include "applications.hpp"
#include "assignment.hpp"
#include "curve.hpp"
#include "error.hpp"
#include "interp_bounds.hpp"
#include "lift_result.hpp"
#include "lifting.hpp"
#include "oracle.hpp"
#include "poly_core.hpp"
#include "polynomial.hpp"
