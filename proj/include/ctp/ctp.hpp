#pragma once

// Umbrella header for the complex-probability engine.

#include "ctp/common.hpp"
#include "ctp/config.hpp"
#include "ctp/density.hpp"
#include "ctp/event.hpp"
#include "ctp/experiment.hpp"
#include "ctp/io.hpp"
#include "ctp/lattice.hpp"
#include "ctp/matrix.hpp"
#include "ctp/measure.hpp"
#include "ctp/path.hpp"
#include "ctp/sampling.hpp"
