#pragma once

#include "moyal/core/error.hpp"
#include "moyal/core/grid.hpp"
#include "moyal/core/linalg.hpp"
#include "moyal/core/moyal_product.hpp"
#include "moyal/core/operator.hpp"
#include "moyal/core/symbol.hpp"
#include "moyal/core/theta.hpp"

#include "moyal/fock/displacement.hpp"
#include "moyal/fock/fock.hpp"

#include "moyal/calculus/calculus.hpp"
#include "moyal/calculus/derivative.hpp"

#include "moyal/spectral/blocks.hpp"
#include "moyal/spectral/cwikel.hpp"
#include "moyal/spectral/kernel.hpp"

#include "moyal/trace/estimator.hpp"
#include "moyal/trace/spectrum.hpp"
#include "moyal/trace/spectrum_io.hpp"
