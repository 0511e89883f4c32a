#pragma once

// Everything except the command line.

#include "valdef/common.hpp"
#include "valdef/construction.hpp"
#include "valdef/element.hpp"
#include "valdef/element_text.hpp"
#include "valdef/field.hpp"
#include "valdef/formula.hpp"
#include "valdef/formula_eval.hpp"
#include "valdef/hensel.hpp"
#include "valdef/henselian.hpp"
#include "valdef/ordered_groups.hpp"
#include "valdef/padic.hpp"
#include "valdef/powers.hpp"
#include "valdef/report.hpp"
#include "valdef/residue_fields.hpp"
#include "valdef/sampling.hpp"
#include "valdef/solvers.hpp"
#include "valdef/suite.hpp"
