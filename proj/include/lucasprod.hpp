#pragma once

#include "lucasprod/abc_evidence.hpp"
#include "lucasprod/bigint.hpp"
#include "lucasprod/error.hpp"
#include "lucasprod/factoring.hpp"
#include "lucasprod/lucas.hpp"
#include "lucasprod/primitive.hpp"
#include "lucasprod/solver.hpp"
#include "lucasprod/square_class.hpp"
#include "lucasprod/term_factorizer.hpp"
