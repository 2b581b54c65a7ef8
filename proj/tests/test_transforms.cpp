#include "doctest.h"
TEST_CASE("placeholder_transforms") { CHECK(true); }
