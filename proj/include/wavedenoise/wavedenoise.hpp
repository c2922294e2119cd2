#pragma once

#include "wavedenoise/bench.hpp"
#include "wavedenoise/dwt.hpp"
#include "wavedenoise/error.hpp"
#include "wavedenoise/filters.hpp"
#include "wavedenoise/image.hpp"
#include "wavedenoise/imgio.hpp"
#include "wavedenoise/metrics.hpp"
#include "wavedenoise/noise.hpp"
#include "wavedenoise/phantom.hpp"
#include "wavedenoise/shrinkage.hpp"
