#pragma once

#include "shishkin/dyadic.hpp"
#include "shishkin/errors.hpp"
#include "shishkin/experiments.hpp"
#include "shishkin/io.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/norms.hpp"
#include "shishkin/operators.hpp"
#include "shishkin/problem.hpp"
#include "shishkin/reference.hpp"
#include "shishkin/solver.hpp"
#include "shishkin/verify.hpp"
