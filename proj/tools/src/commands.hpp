#pragma once

#include "run_config.hpp"

namespace ionchain::cli {

int cmd_units(const RunConfig& cfg);
int cmd_ground_state(const RunConfig& cfg);
int cmd_calibrate_trap(const RunConfig& cfg);
int cmd_phonons(const RunConfig& cfg);
int cmd_map_orbit(const RunConfig& cfg);
int cmd_sweep_k(const RunConfig& cfg);
int cmd_find_kc(const RunConfig& cfg);
int cmd_kc_scaling(const RunConfig& cfg);
int cmd_minima(const RunConfig& cfg);
int cmd_disorder(const RunConfig& cfg);

} // namespace ionchain::cli
