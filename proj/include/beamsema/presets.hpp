// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_PRESETS_HPP
#define BEAMSEMA_PRESETS_HPP

#include <string>
#include <vector>

#include "beamsema/scene_sim.hpp"

namespace beamsema {

// Built-in dataset presets. scenario5 (night, 2300 samples) and scenario7
// (day, 854 samples) model two roadside locations with detector and GPS
// noise; the *_noiseless variants zero every noise source and drop the NLOS
// paths, leaving the beam label a deterministic function of geometry.
std::vector<std::string> preset_names();
bool has_preset(const std::string& name);

// Returns the preset spec with seed = 0; callers override the seed.
DatasetSpec preset_dataset_spec(const std::string& name);

}  // namespace beamsema

#endif
