#pragma once

// Umbrella header: graded meshes, quadrature-based assembly of the 1D
// integral fractional Laplacian, diagonal right preconditioning, direct
// and damped-Jacobi solvers, model problems, and convergence studies.

#include "assembly.hpp"
#include "harness.hpp"
#include "mesh.hpp"
#include "precond.hpp"
#include "problems.hpp"
#include "solve.hpp"
#include "special.hpp"
