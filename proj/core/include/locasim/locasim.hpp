#pragma once

#include "locasim/automaton.hpp"
#include "locasim/ca_io.hpp"
#include "locasim/diagram.hpp"
#include "locasim/errors.hpp"
#include "locasim/explore.hpp"
#include "locasim/localmap.hpp"
#include "locasim/oracle.hpp"
#include "locasim/rtsg.hpp"
