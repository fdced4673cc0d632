#ifndef ROOTFLOW_ROOTFLOW_HPP
#define ROOTFLOW_ROOTFLOW_HPP

#include "rootflow/cyclotomic.hpp"
#include "rootflow/desingularize.hpp"
#include "rootflow/errors.hpp"
#include "rootflow/jet.hpp"
#include "rootflow/normalcurve.hpp"
#include "rootflow/polycurve.hpp"
#include "rootflow/roots.hpp"
#include "rootflow/scalar.hpp"
#include "rootflow/tracking.hpp"

#endif  // ROOTFLOW_ROOTFLOW_HPP
