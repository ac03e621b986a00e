#pragma once

#include "sklab/bounds.hpp"
#include "sklab/coupled.hpp"
#include "sklab/disorder.hpp"
#include "sklab/estimators.hpp"
#include "sklab/experiments.hpp"
#include "sklab/quadrature.hpp"
#include "sklab/rng.hpp"
#include "sklab/sk_core.hpp"
#include "sklab/stats.hpp"
