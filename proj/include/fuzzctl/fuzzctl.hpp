#pragma once

#include "fuzzctl/controller.hpp"
#include "fuzzctl/controller_spec.hpp"
#include "fuzzctl/dsl.hpp"
#include "fuzzctl/errors.hpp"
#include "fuzzctl/inference.hpp"
#include "fuzzctl/membership.hpp"
#include "fuzzctl/rule.hpp"
#include "fuzzctl/simulator.hpp"
#include "fuzzctl/variable.hpp"
#include "fuzzctl/washctl.hpp"
