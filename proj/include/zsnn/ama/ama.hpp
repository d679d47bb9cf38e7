#pragma once

#include "zsnn/ama/aae.hpp"
#include "zsnn/ama/ad.hpp"
#include "zsnn/ama/learned.hpp"
#include "zsnn/ama/oracle.hpp"
#include "zsnn/ama/pddl.hpp"
