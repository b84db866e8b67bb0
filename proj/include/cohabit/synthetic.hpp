/*
 * Copyright 2026 the cohabit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COHABIT_SYNTHETIC_HPP
#define COHABIT_SYNTHETIC_HPP

#include "cohabit/evaluation.hpp"

namespace cohabit {

/// Two-resident corpus with planted preference bands and planted conflicts.
///
/// R1 is strict (temperature 19-21 degC, illumination 5-15 lux, sound
/// 35-45 dB), R2 is flexible. Thirty days of history plant the bands; each
/// day contributes evaluation episodes drawn from fixed families: strong
/// conflicts (hot window draughts, bright blinds, loud speakers), weak or
/// benign disturbances that stay inside the victim's band, and zero-impact
/// co-occurrences (night-time blinds, windows at indoor temperature).
struct SyntheticSpec {
    std::uint64_t seed = 42;
    int days = 30;
    int episodes_per_day = 3;
};

EvalCorpus make_synthetic_corpus(const SyntheticSpec& spec);

/// Rules used by the synthetic home; AC recovery deliberately slow so window
/// draughts produce long band violations.
std::vector<AffinityRule> synthetic_rules();

} // namespace cohabit

#endif
