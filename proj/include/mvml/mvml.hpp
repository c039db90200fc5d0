#pragma once

#include "mvml/algebra.hpp"
#include "mvml/algebra_io.hpp"
#include "mvml/builtins.hpp"
#include "mvml/classes.hpp"
#include "mvml/congruence.hpp"
#include "mvml/errors.hpp"
#include "mvml/evaluation.hpp"
#include "mvml/formula.hpp"
#include "mvml/frame.hpp"
#include "mvml/framelab.hpp"
#include "mvml/generators.hpp"
#include "mvml/ksat.hpp"
#include "mvml/model_io.hpp"
#include "mvml/parser.hpp"
#include "mvml/polytrans.hpp"
#include "mvml/semantics.hpp"
#include "mvml/tableau.hpp"
#include "mvml/term.hpp"
#include "mvml/translation.hpp"
