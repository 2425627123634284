//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_IO_HPP
#define ITEMFIELD_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "itemfield/itemgraph.hpp"
#include "itemfield/model.hpp"

namespace itemfield {

// Text formats, every real written with 17 significant digits so a load
// reproduces the saved doubles exactly.
//
//   ITEMFIELD-STATS v1          ITEMFIELD-MODEL v1
//   N <items>                   N <items>
//   U <users>                   ridge <ridge>
//   K <k>                       K <k>
//   global_mean <g>             global_mean <g>
//   E <edges>                   E <edges>
//   <raw_id> <mu>      x N      <raw_id> <mu>      x N
//   <i> <j> <sim> <s_ij> x E    <i> <j> <theta_ij> x E
//   <i> <s_ii>         x N
//
// i, j are dense item indices (the line order of the mean block).

void write_stats(std::ostream &out, const SufficientStats &stats);
SufficientStats read_stats(std::istream &in);
void save_stats(const SufficientStats &stats, const std::filesystem::path &path);
SufficientStats load_stats(const std::filesystem::path &path);

void write_model(std::ostream &out, const ItemFieldModel &model);
/// Throws FormatError on a bad header or truncated body and ValidationError
/// when the weights break the model invariants.
ItemFieldModel read_model(std::istream &in);
void save_model(const ItemFieldModel &model, const std::filesystem::path &path);
ItemFieldModel load_model(const std::filesystem::path &path);

}  // namespace itemfield

#endif  // ITEMFIELD_IO_HPP
