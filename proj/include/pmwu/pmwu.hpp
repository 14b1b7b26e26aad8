#pragma once

#include "pmwu/errors.hpp"
#include "pmwu/generators.hpp"
#include "pmwu/graph.hpp"
#include "pmwu/implicit_ops.hpp"
#include "pmwu/instance.hpp"
#include "pmwu/line_search.hpp"
#include "pmwu/matrix_market.hpp"
#include "pmwu/operators.hpp"
#include "pmwu/oracle.hpp"
#include "pmwu/parallel.hpp"
#include "pmwu/problems.hpp"
#include "pmwu/smooth.hpp"
#include "pmwu/solver.hpp"
#include "pmwu/sparse.hpp"
