#pragma once

#include "zsnn/harness/bench.hpp"
#include "zsnn/harness/cli.hpp"
#include "zsnn/harness/config.hpp"
#include "zsnn/harness/models.hpp"
#include "zsnn/harness/strip.hpp"
