#pragma once

#include "shiqv/concept.hpp"
#include "shiqv/json_io.hpp"
#include "shiqv/labelset.hpp"
#include "shiqv/model_search.hpp"
#include "shiqv/nlgen.hpp"
#include "shiqv/ontology.hpp"
#include "shiqv/oracle.hpp"
#include "shiqv/parser.hpp"
#include "shiqv/reasoner.hpp"
#include "shiqv/refiner.hpp"
#include "shiqv/rule_check.hpp"
