#include "doctest.h"
TEST_CASE("placeholder_haar") { CHECK(true); }
