/*
 * Copyright 2026 The tcal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>

#include "tcal/core.hpp"
#include "tcal/synthdata.hpp"

namespace tcal::testing {

// preds [0.2,0.3,0.7,0.9], labels [0,1,1,1]
inline Dataset four_point_fixture() {
  Eigen::VectorXd p(4);
  p << 0.2, 0.3, 0.7, 0.9;
  Eigen::VectorXi y(4);
  y << 0, 1, 1, 1;
  return Dataset(p, y);
}

// Desk-scale dataset behind tests/data/golden_test_based.svg. Changing it
// invalidates the golden file.
inline Dataset golden_dataset() {
  RandomStream rng(42, 0);
  Eigen::VectorXd p(400);
  Eigen::VectorXi y(400);
  for (Index i = 0; i < 400; ++i) {
    p[i] = std::round(rng.uniform() * 1000.0) / 1000.0;
    y[i] = rng.bernoulli(std::min(1.0, p[i] * 1.2));
  }
  return Dataset(p, y);
}

}  // namespace tcal::testing
