#pragma once

#include "zsnn/planner/astar.hpp"
#include "zsnn/planner/solve.hpp"
