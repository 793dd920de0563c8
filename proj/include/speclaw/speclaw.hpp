#pragma once

#include "errors.hpp"
#include "io.hpp"
#include "matrices.hpp"
#include "metrics.hpp"
#include "models.hpp"
#include "rng.hpp"
#include "spectra.hpp"
#include "statistics.hpp"
