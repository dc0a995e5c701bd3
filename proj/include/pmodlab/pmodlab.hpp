#pragma once

#include "pmodlab/capacity.hpp"
#include "pmodlab/cli.hpp"
#include "pmodlab/distortion.hpp"
#include "pmodlab/quadrature.hpp"
#include "pmodlab/radial_map.hpp"
#include "pmodlab/sampling.hpp"
#include "pmodlab/space.hpp"
#include "pmodlab/theorems.hpp"
#include "pmodlab/trend.hpp"
#include "pmodlab/weight.hpp"
