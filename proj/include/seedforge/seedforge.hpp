// Copyright 2026 The SeedForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDFORGE_SEEDFORGE_HPP_
#define SEEDFORGE_SEEDFORGE_HPP_

#include "seedforge/campaign.hpp"
#include "seedforge/checkpoint.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/corpus.hpp"
#include "seedforge/coverage.hpp"
#include "seedforge/error.hpp"
#include "seedforge/mlp.hpp"
#include "seedforge/mutator.hpp"
#include "seedforge/report.hpp"
#include "seedforge/rng.hpp"
#include "seedforge/strategies.hpp"
#include "seedforge/target.hpp"
#include "seedforge/wgan.hpp"

#endif  // SEEDFORGE_SEEDFORGE_HPP_
