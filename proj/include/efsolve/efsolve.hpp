#pragma once

// Umbrella header for the efsolve library.

#include "efsolve/beliefs.hpp"
#include "efsolve/concepts.hpp"
#include "efsolve/corpus.hpp"
#include "efsolve/experiments.hpp"
#include "efsolve/game.hpp"
#include "efsolve/lp.hpp"
#include "efsolve/model.hpp"
#include "efsolve/rational.hpp"
#include "efsolve/render.hpp"
#include "efsolve/solvers.hpp"
