#pragma once

#include "hamjac/errors.hpp"
#include "hamjac/flows/export.hpp"
#include "hamjac/flows/flows.hpp"
#include "hamjac/flows/integrator.hpp"
#include "hamjac/flows/trajectory.hpp"
#include "hamjac/hj.hpp"
#include "hamjac/models.hpp"
#include "hamjac/numerics/dual.hpp"
#include "hamjac/numerics/gradient.hpp"
#include "hamjac/parallel.hpp"
#include "hamjac/phase/expression.hpp"
#include "hamjac/phase/hamiltonian.hpp"
#include "hamjac/phase/point.hpp"
#include "hamjac/phase/system_file.hpp"
#include "hamjac/structures.hpp"
#include "hamjac/version.hpp"
