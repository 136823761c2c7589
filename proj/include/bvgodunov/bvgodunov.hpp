#pragma once

#include "config.hpp"
#include "convergence.hpp"
#include "csv.hpp"
#include "datum.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "flux_model.hpp"
#include "godunov.hpp"
#include "grid.hpp"
#include "keyvalue.hpp"
#include "piecewise.hpp"
#include "report.hpp"
#include "roots.hpp"
