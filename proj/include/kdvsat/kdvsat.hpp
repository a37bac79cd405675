#pragma once

#include "kdvsat/banded.hpp"
#include "kdvsat/diagnostics.hpp"
#include "kdvsat/energy.hpp"
#include "kdvsat/error.hpp"
#include "kdvsat/grid.hpp"
#include "kdvsat/norms.hpp"
#include "kdvsat/operators.hpp"
#include "kdvsat/saturation.hpp"
#include "kdvsat/stepper.hpp"
