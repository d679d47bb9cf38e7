#pragma once

#include "zsnn/metrics/report.hpp"
#include "zsnn/metrics/stability.hpp"
