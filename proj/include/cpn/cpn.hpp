#pragma once

#include "cpn/chart.hpp"
#include "cpn/classical_flow.hpp"
#include "cpn/core.hpp"
#include "cpn/observables.hpp"
#include "cpn/pauli.hpp"
#include "cpn/quantum.hpp"
#include "cpn/scenario.hpp"
#include "cpn/version.hpp"
