#pragma once

#include "sgp/error.hpp"
#include "sgp/grid.hpp"
#include "sgp/potentials.hpp"
#include "sgp/energy.hpp"
#include "sgp/linalg.hpp"
#include "sgp/sobolev.hpp"
#include "sgp/descent.hpp"
#include "sgp/newton.hpp"
#include "sgp/solver.hpp"
#include "sgp/config.hpp"
#include "sgp/io.hpp"
#include "sgp/reference_tables.hpp"
#include "sgp/experiment.hpp"
