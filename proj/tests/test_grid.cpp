#include "doctest.h"
TEST_CASE("placeholder_grid") { CHECK(true); }
