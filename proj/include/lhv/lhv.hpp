#pragma once

#include "lhv/analysis.hpp"
#include "lhv/closed_form.hpp"
#include "lhv/core.hpp"
#include "lhv/io.hpp"
#include "lhv/montecarlo.hpp"
#include "lhv/quadrature.hpp"
#include "lhv/spectral.hpp"
#include "lhv/verify.hpp"
