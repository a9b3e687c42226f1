#ifndef SAMPLAN_SAMPLAN_HPP
#define SAMPLAN_SAMPLAN_HPP

#include "samplan/binomial.hpp"
#include "samplan/designer.hpp"
#include "samplan/life_test.hpp"
#include "samplan/oc.hpp"
#include "samplan/simulator.hpp"
#include "samplan/tables.hpp"

#endif // SAMPLAN_SAMPLAN_HPP
