// Copyright 2026 The Bitsalvage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BITSALVAGE_SYNTH_SCENE_H_
#define BITSALVAGE_SYNTH_SCENE_H_

#include <cstdint>

#include "bitsalvage/common/image.h"

namespace bitsalvage::synth {

// Deterministic natural-looking RGB test scene: a lit backdrop, fractal
// value noise, a handful of soft-edged shapes, some periodic texture and
// sensor-like grain, stretched to the full 0..255 range. Same seed, same
// image.
ImageBuffer GenerateScene(int width, int height, uint64_t seed);

}  // namespace bitsalvage::synth

#endif  // BITSALVAGE_SYNTH_SCENE_H_
