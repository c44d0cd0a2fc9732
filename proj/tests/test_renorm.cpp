#include "doctest.h"

TEST_SUITE("renorm") {}
