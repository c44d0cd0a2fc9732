#include "doctest.h"

TEST_SUITE("pde_flow") {}
