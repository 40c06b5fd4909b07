#pragma once

#include "analysis.hpp"
#include "automaton.hpp"
#include "canonical.hpp"
#include "constructions.hpp"
#include "io.hpp"
#include "rewrite.hpp"
#include "search.hpp"
