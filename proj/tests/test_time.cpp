#include <gtest/gtest.h>

#include "tact/time.hpp"

using tact::TimeValue;

TEST(TimeValue, InfinityComparesGreaterThanEveryFiniteValue) {
  EXPECT_LT(TimeValue(0), TimeValue::infinity());
  EXPECT_LT(TimeValue(1'000'000'000), TimeValue::infinity());
  EXPECT_EQ(TimeValue::infinity(), TimeValue::infinity());
}

TEST(TimeValue, ShiftIsAbsorbedByInfinity) {
  EXPECT_EQ(TimeValue::infinity().shifted(-7), TimeValue::infinity());
  EXPECT_EQ(TimeValue(10).shifted(-7), TimeValue(3));
  EXPECT_EQ(TimeValue(10) + 5, TimeValue(15));
}

TEST(TimeValue, MinMax) {
  EXPECT_EQ(tact::max(TimeValue(3), TimeValue(8)), TimeValue(8));
  EXPECT_EQ(tact::min(TimeValue(3), TimeValue::infinity()), TimeValue(3));
}
