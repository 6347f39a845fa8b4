#pragma once

#include "nnrw/model.hpp"

#include <string>

namespace nnrw {

// Model file schema "nnrw/1": a line-oriented text document. Reals are
// written with 17 significant digits, which round-trips 64-bit floats
// exactly, so save -> load -> save is byte-identical. The pairing plan is
// not stored; it is regenerated from (p_units, tau) on load and checked
// against the stored hidden width. Unit indices are 0-based (declared by
// the index_base field).
std::string model_to_string(const TrainedModel& model);
TrainedModel model_from_string(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

} // namespace nnrw
