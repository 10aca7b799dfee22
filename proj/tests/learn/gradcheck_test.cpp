// Copyright 2026 The ODA Authors
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

#include "learner_checks.hpp"

namespace oda::learn {
namespace {

using namespace oda::testing;

constexpr double kTol = 1e-4;
constexpr int kPoints = 10;

TEST(GradCheck, CriticLossPsiDatasetTargets) {
  const Model m(small_config());
  for (int k = 0; k < kPoints; ++k) {
    EXPECT_LT(gradcheck_critic_psi(m, 100 + k, TargetMode::kDatasetAction), kTol)
        << "point " << k;
  }
}

TEST(GradCheck, CriticLossPsiPolicyTargets) {
  const Model m(small_config());
  for (int k = 0; k < kPoints; ++k) {
    EXPECT_LT(gradcheck_critic_psi(m, 200 + k, TargetMode::kPolicyAction), kTol)
        << "point " << k;
  }
}

TEST(GradCheck, CriticLossPhiThroughLatent) {
  const Model m(small_config());
  for (int k = 0; k < kPoints; ++k) {
    EXPECT_LT(gradcheck_critic_phi(m, 300 + k), kTol) << "point " << k;
  }
}

TEST(GradCheck, ActorLossTheta) {
  const Model m(small_config());
  for (int k = 0; k < kPoints; ++k) {
    EXPECT_LT(gradcheck_actor_theta(m, 400 + k), kTol) << "point " << k;
  }
}

TEST(GradCheck, KlLossPhi) {
  const Model m(small_config());
  for (int k = 0; k < kPoints; ++k) {
    EXPECT_LT(gradcheck_kl_phi(m, 500 + k), kTol) << "point " << k;
  }
}

TEST(GradCheck, ActorWithoutLatent) {
  NetworkConfig c = small_config();
  c.latent_dim = 0;
  const Model m(c);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LT(gradcheck_actor_theta(m, 600 + k), kTol);
    EXPECT_LT(gradcheck_critic_psi(m, 600 + k, TargetMode::kDatasetAction), kTol);
  }
}

}  // namespace
}  // namespace oda::learn
