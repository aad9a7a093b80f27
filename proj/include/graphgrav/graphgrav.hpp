#pragma once

#include "graphgrav/action.hpp"
#include "graphgrav/curvature.hpp"
#include "graphgrav/error.hpp"
#include "graphgrav/generators.hpp"
#include "graphgrav/graph.hpp"
#include "graphgrav/json_io.hpp"
#include "graphgrav/reproduce.hpp"
#include "graphgrav/search.hpp"
#include "graphgrav/transport.hpp"
#include "graphgrav/tree_dynamics.hpp"
