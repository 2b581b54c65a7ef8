#include "doctest.h"
TEST_CASE("placeholder_constants") { CHECK(true); }
