#include "doctest.h"

TEST_SUITE("hierarchical") {}
