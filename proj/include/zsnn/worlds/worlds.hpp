#pragma once

#include "zsnn/worlds/classify.hpp"
#include "zsnn/worlds/dataset.hpp"
#include "zsnn/worlds/glyphs.hpp"
#include "zsnn/worlds/noise.hpp"
#include "zsnn/worlds/render.hpp"
#include "zsnn/worlds/world.hpp"
