#pragma once

#include "bta/dsl/catalog.hpp"

namespace bta::fps {

// Conditions and actions of the shooter domain. Condition keys match the
// facts published by arena::observe.
dsl::NodeCatalog shooter_catalog();

}  // namespace bta::fps
