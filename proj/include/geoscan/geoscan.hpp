#pragma once

#include "geoscan/baselines.hpp"
#include "geoscan/config.hpp"
#include "geoscan/distributions.hpp"
#include "geoscan/error.hpp"
#include "geoscan/geometry.hpp"
#include "geoscan/io.hpp"
#include "geoscan/kernels.hpp"
#include "geoscan/mmd.hpp"
#include "geoscan/nodeset.hpp"
#include "geoscan/random.hpp"
#include "geoscan/scan.hpp"
#include "geoscan/sim.hpp"
#include "geoscan/svg.hpp"
#include "geoscan/theory.hpp"
