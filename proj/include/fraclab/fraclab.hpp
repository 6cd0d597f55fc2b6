#pragma once

#include "fraclab/errors.hpp"
#include "fraclab/params.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/radial_grid.hpp"
#include "fraclab/bessel.hpp"
#include "fraclab/radial_spectral.hpp"
#include "fraclab/profiles.hpp"
#include "fraclab/fft.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/energy_grid.hpp"
#include "fraclab/solver.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/config.hpp"
#include "fraclab/io.hpp"
