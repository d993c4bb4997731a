#pragma once

#include "gravent/entropy.hpp"
#include "gravent/errors.hpp"
#include "gravent/fock.hpp"
#include "gravent/gaussian.hpp"
#include "gravent/minimize.hpp"
#include "gravent/model.hpp"
#include "gravent/perturbation.hpp"
#include "gravent/pn_potential.hpp"
#include "gravent/sweep.hpp"
