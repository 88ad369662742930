#pragma once

#include <map>
#include <string>
#include <vector>

#include "gamot/tape.hpp"

namespace gamot {

// Checkpoint file layout (version 1):
//
//   gamot-checkpoint 1\n
//   tensor <name> <rank> <dim0> [<dim1>] <byte-offset>\n     (one per tensor)
//   data <total-bytes>\n
//   <raw little-endian IEEE-754 doubles, concatenated row-major>
//
// Offsets are bytes from the start of the data section. Tensors appear in the
// order they were passed, names must be unique. Readers validate the header,
// the offsets and the total length.
void save_checkpoint(const std::string& path, const std::vector<const Parameter*>& params);

std::map<std::string, Tensor> load_checkpoint(const std::string& path);

// Strict restore: every parameter must be present with the same shape, and
// the file must not contain unknown tensors.
void load_checkpoint_into(const std::string& path, const std::vector<Parameter*>& params);

}  // namespace gamot
