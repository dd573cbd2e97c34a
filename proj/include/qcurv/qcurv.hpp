#pragma once

// Umbrella header for the whole library.

#include "qcurv/ball.hpp"
#include "qcurv/curvature.hpp"
#include "qcurv/deformation.hpp"
#include "qcurv/factor.hpp"
#include "qcurv/galois.hpp"
#include "qcurv/lattice.hpp"
#include "qcurv/matrix.hpp"
#include "qcurv/parse.hpp"
#include "qcurv/print.hpp"
#include "qcurv/qmodule.hpp"
#include "qcurv/thetasolve.hpp"
