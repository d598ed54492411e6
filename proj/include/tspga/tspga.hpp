#pragma once

#include "tspga/bench/optima.hpp"
#include "tspga/core/engine.hpp"
#include "tspga/core/rng.hpp"
#include "tspga/core/tour.hpp"
#include "tspga/io/tsplib.hpp"
#include "tspga/operators/crossover.hpp"
