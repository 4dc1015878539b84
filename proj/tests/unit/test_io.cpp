// Copyright 2026 The nfrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "nfrec/baselines.hpp"
#include "nfrec/error.hpp"
#include "nfrec/io.hpp"
#include "oracles.hpp"

namespace nfrec {
namespace {

TEST(Io, InstanceRoundTripIsExact) {
  const Instance a = testing::random_instance(15, 51, {.cached = 3});
  std::stringstream s;
  write_instance(s, a);
  const Instance b = read_instance(s);
  EXPECT_EQ(a.similarity(), b.similarity());
  EXPECT_EQ(a.cost(), b.cost());
  EXPECT_EQ(a.popularity(), b.popularity());
  EXPECT_EQ(a.cached(), b.cached());
  EXPECT_EQ(instance_fingerprint(a), instance_fingerprint(b));
}

TEST(Io, PolicyAndValuesRoundTrip) {
  const Instance inst = testing::random_instance(12, 52);
  const Policy r = q_mixed_policy(inst, 3, 0.37);
  std::stringstream s;
  write_policy(s, r);
  const Policy back = read_policy(s);
  EXPECT_EQ(back.batch_size(), 3);
  EXPECT_EQ(back.frequencies(), r.frequencies());
  Vector v = Vector::LinSpaced(7, 0.1, 1.0 / 3.0);
  std::stringstream t;
  write_values(t, v);
  EXPECT_EQ(read_values(t), v);
}

TEST(Io, MalformedInputRaisesDataError) {
  std::istringstream wrong_kind("nfrec-policy 1\nK 2 N 1\nentries 0\n");
  EXPECT_THROW(read_instance(wrong_kind), DataError);
  std::istringstream wrong_version("nfrec-instance 9\n");
  EXPECT_THROW(read_instance(wrong_version), DataError);
  std::istringstream truncated("nfrec-instance 1\nK 2\nsimilarity 1\n0 1 0.5\ncost\n1\n");
  EXPECT_THROW(read_instance(truncated), DataError);
  std::istringstream bad_index("nfrec-policy 1\nK 2 N 1\nentries 1\n0 5 1\n");
  EXPECT_THROW(read_policy(bad_index), DataError);
  std::istringstream invalid(
      "nfrec-instance 1\nK 2\nsimilarity 0\ncost\n1\n1\npopularity\n0.9\n0.9\ncached 0\n\n");
  EXPECT_THROW(read_instance(invalid), DataError);
  EXPECT_THROW(load_instance("/nonexistent/nowhere.txt"), DataError);
}

}  // namespace
}  // namespace nfrec
