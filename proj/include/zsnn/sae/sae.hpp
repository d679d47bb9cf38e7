#pragma once

#include "zsnn/sae/latent.hpp"
#include "zsnn/sae/loss.hpp"
#include "zsnn/sae/model.hpp"
#include "zsnn/sae/prune.hpp"
#include "zsnn/sae/train.hpp"
