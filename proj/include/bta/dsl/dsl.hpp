#pragma once

#include "bta/dsl/ast.hpp"
#include "bta/dsl/catalog.hpp"
#include "bta/dsl/json_io.hpp"
#include "bta/dsl/parser.hpp"
#include "bta/dsl/printer.hpp"
#include "bta/dsl/validate.hpp"
