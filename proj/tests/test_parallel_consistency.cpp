#include "doctest.h"

TEST_SUITE("parallel") {}
