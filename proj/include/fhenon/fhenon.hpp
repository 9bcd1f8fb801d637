#pragma once

#include "fhenon/errors.hpp"
#include "fhenon/params.hpp"
#include "fhenon/quadrature.hpp"
#include "fhenon/kernel.hpp"
#include "fhenon/operator.hpp"
#include "fhenon/solver.hpp"
#include "fhenon/radial.hpp"
#include "fhenon/validate.hpp"
