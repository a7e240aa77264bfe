#ifndef Q41_Q41_HPP
#define Q41_Q41_HPP

#include "q41/error.hpp"
#include "q41/pseudo_euclidean.hpp"
#include "q41/jet.hpp"
#include "q41/surfaces.hpp"
#include "q41/dsl.hpp"
#include "q41/frame.hpp"
#include "q41/identities.hpp"
#include "q41/grid.hpp"
#include "q41/transforms.hpp"
#include "q41/analysis.hpp"

#endif  // Q41_Q41_HPP
