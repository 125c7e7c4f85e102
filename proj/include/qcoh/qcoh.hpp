#pragma once

#include "qcoh/error.hpp"
#include "qcoh/qmat.hpp"
#include "qcoh/states.hpp"
#include "qcoh/coherence.hpp"
#include "qcoh/models.hpp"
#include "qcoh/perturbation.hpp"
#include "qcoh/adiabatic.hpp"
#include "qcoh/io.hpp"
#include "qcoh/commands.hpp"
