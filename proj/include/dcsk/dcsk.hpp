#pragma once

#include "error.hpp"
#include "random.hpp"
#include "chaos.hpp"
#include "fading.hpp"
#include "ris.hpp"
#include "analytics.hpp"
#include "system.hpp"
#include "simulator.hpp"
#include "planning.hpp"
#include "config_io.hpp"
#include "experiment.hpp"
