#pragma once

// Spectral correlation density estimation: FFT accumulation method and
// strip spectral correlation analyser, with reference oracles and a
// resource planner.

#include "scd/errors.hpp"
#include "scd/types.hpp"
#include "scd/parallel.hpp"
#include "scd/fft.hpp"
#include "scd/signal.hpp"
#include "scd/iq_io.hpp"
#include "scd/estimate.hpp"
#include "scd/fam.hpp"
#include "scd/ssca.hpp"
#include "scd/oracle.hpp"
#include "scd/planner.hpp"
#include "scd/scd_file.hpp"
