#pragma once

#include "signsearch/classical.hpp"
#include "signsearch/error.hpp"
#include "signsearch/experiment.hpp"
#include "signsearch/graph.hpp"
#include "signsearch/search.hpp"
#include "signsearch/spectral.hpp"
#include "signsearch/state_io.hpp"
#include "signsearch/walk.hpp"
