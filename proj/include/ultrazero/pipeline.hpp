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

#include "ultrazero/constructions.hpp"
#include "ultrazero/lomega.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/scale_analysis.hpp"

namespace ultrazero {

/// Result of the general dimension-zero embedding pipeline.
struct UniversalEmbedding {
  Dim0Certificate certificate;
  LOmegaEmbedding embedding;  // source = the input space
  EmbeddingDigest digest;     // ratios mu(f x, f y) / d(x, y)
  Rational upper_bound;       // 6m
  bool within_bounds = false; // 1 <= every ratio <= 6m
};

/// Embeds an arbitrary finite metric space into L_omega:
/// subdominant ultrametric rho, rescaled by 2m so that d <= 2m*rho <= 2m*d,
/// then rounded up to powers of three and embedded isometrically. The
/// composite satisfies d <= mu(f x, f y) < 6m * d.
inline UniversalEmbedding embed_universal(const FiniteMetricSpace& space) {
  Dim0Certificate cert = dim0_certificate(space);
  const FiniteMetricSpace rho = subdominant_ultrametric(space).rho;
  LOmegaEmbedding embedding = embed_3n_valued(quantize_3adic(scale_space(rho, 2 * cert.m)));
  embedding.source = space;
  embedding.mode = EmbeddingMode::bilipschitz3;
  EmbeddingDigest digest = verify_embedding(embedding);
  const Rational upper = 6 * cert.m;
  digest.ok = digest.min_ratio >= 1 && digest.max_ratio <= upper;
  const bool ok = digest.ok;
  return UniversalEmbedding{std::move(cert), std::move(embedding), digest, upper, ok};
}

}  // namespace ultrazero
