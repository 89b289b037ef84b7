#pragma once

#include "wieler/analysis.hpp"
#include "wieler/ap_complex.hpp"
#include "wieler/coboundary.hpp"
#include "wieler/deviation.hpp"
#include "wieler/dynamics.hpp"
#include "wieler/exact.hpp"
#include "wieler/function_spaces.hpp"
#include "wieler/io.hpp"
#include "wieler/polynomial.hpp"
#include "wieler/resonance_fit.hpp"
#include "wieler/spectral.hpp"
#include "wieler/substitution.hpp"
