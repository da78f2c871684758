#pragma once

#include <string>

#include "isadre/training.hpp"

namespace isadre {

// Binary checkpoint, little-endian:
//   magic "ISADREC1"
//   u32 time_inputs (2 secant, 1 tangent), u32 data_dim, u32 time_freqs
//   u32 hidden count, u32 widths...
//   i64 train step, i64 optimizer step, i64 skipped steps
//   u64 param count, f64 params, f64 first moments, f64 second moments
//   u64 rng text length, rng engine state as text
// Raw doubles round-trip bit-exactly; the engine state makes a resumed run
// continue the exact trajectory of an uninterrupted one.
void save_checkpoint(const std::string& path, const TrainState& state);

TrainState load_checkpoint(const std::string& path);

// Peek at the stored topology without loading moments.
NetSpec checkpoint_net_spec(const std::string& path);

}  // namespace isadre
