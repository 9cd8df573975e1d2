#pragma once

#include "cmqb/grid.hpp"
#include "cmqb/model.hpp"
#include "cmqb/orbitals.hpp"
#include "cmqb/integrals.hpp"
#include "cmqb/pauli.hpp"
#include "cmqb/boson.hpp"
#include "cmqb/fermion.hpp"
#include "cmqb/hamiltonian.hpp"
#include "cmqb/state.hpp"
#include "cmqb/evolve.hpp"
#include "cmqb/trotter.hpp"
#include "cmqb/density.hpp"
#include "cmqb/tomography.hpp"
#include "cmqb/observables.hpp"
#include "cmqb/bo.hpp"
#include "cmqb/io.hpp"
#include "cmqb/config.hpp"
#include "cmqb/orchestrator.hpp"
