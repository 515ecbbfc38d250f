#pragma once

#include "raospacing/angle_file.hpp"
#include "raospacing/error.hpp"
#include "raospacing/exact.hpp"
#include "raospacing/gram_charlier.hpp"
#include "raospacing/moments.hpp"
#include "raospacing/simulation.hpp"
#include "raospacing/spacings.hpp"
#include "raospacing/uniformity_test.hpp"
