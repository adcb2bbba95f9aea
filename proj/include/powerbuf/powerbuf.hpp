#pragma once

#include "powerbuf/compare.hpp"
#include "powerbuf/config.hpp"
#include "powerbuf/csv.hpp"
#include "powerbuf/distribution.hpp"
#include "powerbuf/errors.hpp"
#include "powerbuf/figures.hpp"
#include "powerbuf/fixed_interval.hpp"
#include "powerbuf/fixed_size.hpp"
#include "powerbuf/lifespan.hpp"
#include "powerbuf/profile.hpp"
#include "powerbuf/rng.hpp"
#include "powerbuf/sim.hpp"
#include "powerbuf/tree.hpp"
