#pragma once

// Umbrella header: nonlinear-dynamics markers for sampled signals.

#include "nld/entropy.hpp"
#include "nld/fractal.hpp"
#include "nld/hurst.hpp"
#include "nld/io.hpp"
#include "nld/pipeline.hpp"
#include "nld/preprocess.hpp"
#include "nld/series.hpp"
#include "nld/stats.hpp"
#include "nld/synth.hpp"
#include "nld/version.hpp"
