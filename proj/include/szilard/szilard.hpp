#pragma once

#include "szilard/analytic.hpp"
#include "szilard/constants.hpp"
#include "szilard/cycle.hpp"
#include "szilard/density.hpp"
#include "szilard/errors.hpp"
#include "szilard/fd.hpp"
#include "szilard/geometry.hpp"
#include "szilard/io.hpp"
#include "szilard/kahan.hpp"
#include "szilard/lanczos.hpp"
#include "szilard/qbl.hpp"
#include "szilard/solver2d.hpp"
#include "szilard/spectrum.hpp"
#include "szilard/sweep.hpp"
#include "szilard/thermo.hpp"
#include "szilard/version.hpp"
