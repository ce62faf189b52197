#pragma once

#include "hhcare/bench.hpp"
#include "hhcare/exact.hpp"
#include "hhcare/generator.hpp"
#include "hhcare/greedy.hpp"
#include "hhcare/io.hpp"
#include "hhcare/model.hpp"
#include "hhcare/rational.hpp"
#include "hhcare/reduction.hpp"
#include "hhcare/tabu.hpp"
