#pragma once

#include "sketchkrylov/classic_bgs.hpp"
#include "sketchkrylov/dense.hpp"
#include "sketchkrylov/error.hpp"
#include "sketchkrylov/experiment.hpp"
#include "sketchkrylov/generators.hpp"
#include "sketchkrylov/krylov.hpp"
#include "sketchkrylov/linear_operator.hpp"
#include "sketchkrylov/matrix.hpp"
#include "sketchkrylov/matrix_market.hpp"
#include "sketchkrylov/orthogonalizer.hpp"
#include "sketchkrylov/philox.hpp"
#include "sketchkrylov/rbgs.hpp"
#include "sketchkrylov/sketch.hpp"
#include "sketchkrylov/sparse.hpp"
#include "sketchkrylov/text_format.hpp"
