#pragma once

#include "biphoton/numerics/erf.hpp"
#include "biphoton/numerics/error.hpp"
#include "biphoton/numerics/fft.hpp"
#include "biphoton/numerics/grid.hpp"
#include "biphoton/numerics/parallel.hpp"
#include "biphoton/numerics/quadrature.hpp"
#include "biphoton/numerics/width.hpp"
#include "biphoton/dispersion/material.hpp"
#include "biphoton/dispersion/summary.hpp"
#include "biphoton/dispersion/wavevector.hpp"
#include "biphoton/crystal/conditions.hpp"
#include "biphoton/crystal/spec.hpp"
#include "biphoton/crystal/tpsa.hpp"
#include "biphoton/propagation/fibre.hpp"
#include "biphoton/propagation/sweep.hpp"
#include "biphoton/propagation/temporal.hpp"
#include "biphoton/cli/config.hpp"
#include "biphoton/cli/run.hpp"
