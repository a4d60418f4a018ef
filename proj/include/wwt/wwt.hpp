#pragma once

#include "wwt/errors.hpp"
#include "wwt/markov.hpp"
#include "wwt/model.hpp"
#include "wwt/network.hpp"
#include "wwt/oracle.hpp"
#include "wwt/profile.hpp"
#include "wwt/series.hpp"
#include "wwt/solver.hpp"
#include "wwt/spectral.hpp"
