/*
 * Copyright 2026 The ultrazero Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ultrazero/ultrazero.hpp"

namespace uzt {

/// Builds a validated space from labels and the strict upper triangle,
/// row by row: d(0,1), d(0,2), ..., d(1,2), ...
inline ultrazero::FiniteMetricSpace tri(std::vector<std::string> labels,
                                        std::vector<ultrazero::Rational> upper) {
  const std::size_t n = labels.size();
  ultrazero::Matrix m(n, std::vector<ultrazero::Rational>(n));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = upper.at(k++);
  return ultrazero::validate_metric(std::move(labels), m);
}

/// The two-step line a - b - c.
inline ultrazero::FiniteMetricSpace line3() { return tri({"a", "b", "c"}, {1, 2, 1}); }

/// Runs f and returns the error code it throws (fails the test if none).
inline ultrazero::Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ultrazero::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ultrazero::Error";
  return ultrazero::Errc::MalformedInput;
}

inline std::vector<std::size_t> indices_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ultrazero::Error& e) {
    return e.indices();
  }
  ADD_FAILURE() << "expected an ultrazero::Error";
  return {};
}

}  // namespace uzt
