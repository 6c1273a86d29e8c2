#pragma once

#include "sentgen/analysis.hpp"
#include "sentgen/derivation.hpp"
#include "sentgen/diagnostic.hpp"
#include "sentgen/emitters.hpp"
#include "sentgen/grammar.hpp"
#include "sentgen/parse.hpp"
#include "sentgen/probability.hpp"
#include "sentgen/random.hpp"
#include "sentgen/validate.hpp"
