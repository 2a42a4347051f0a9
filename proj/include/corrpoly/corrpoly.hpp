#pragma once

#include "corrpoly/error.hpp"
#include "corrpoly/exactnum.hpp"
#include "corrpoly/generators.hpp"
#include "corrpoly/simplex.hpp"
#include "corrpoly/hulls.hpp"
#include "corrpoly/ranks.hpp"
#include "corrpoly/reductions.hpp"
#include "corrpoly/structured.hpp"
#include "corrpoly/formats.hpp"
