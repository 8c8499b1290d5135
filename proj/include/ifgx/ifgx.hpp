#pragma once

#include "ifgx/bench.hpp"
#include "ifgx/benchgen.hpp"
#include "ifgx/coverage.hpp"
#include "ifgx/error.hpp"
#include "ifgx/explorer.hpp"
#include "ifgx/flows.hpp"
#include "ifgx/geometry.hpp"
#include "ifgx/ifg.hpp"
#include "ifgx/ifg_io.hpp"
#include "ifgx/random_baseline.hpp"
#include "ifgx/report.hpp"
#include "ifgx/scene.hpp"
#include "ifgx/scene_io.hpp"
#include "ifgx/sim.hpp"
