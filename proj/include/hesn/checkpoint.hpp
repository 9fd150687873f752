#pragma once

#include "hesn/hybrid.hpp"
#include "hesn/reservoir.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace hesn {

/// ROM section of a hybrid checkpoint.
struct RomSection {
  ModelParams params;
  int full_dim = 0;
  double dt = 0.01;
  RomDelaySource source = RomDelaySource::kFullInput;
  InputPartition partition;
};

struct Checkpoint {
  Reservoir reservoir;
  std::optional<RomSection> rom;
  std::string manifest;  // empty when absent

  /// Rebuilds the hybrid model; requires a ROM section.
  HybridEsn hybrid() const;
};

/// Text format:
///   ESN v1
///   Nx Nu Ny Nf
///   W_IN            then Nx rows of Nu values
///   W nnz           then nnz "row col value" lines, row-major
///   W_OUT           then Ny rows of Nf values
///   ROM             (hybrid only) key-value lines up to END_ROM
/// Values use the shortest round-trip decimal form, so reading back is exact.
void write_checkpoint(std::ostream& out, const Reservoir& reservoir,
                      const std::optional<RomSection>& rom = std::nullopt,
                      const std::string& manifest = {});
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const Reservoir& reservoir,
                     const std::optional<RomSection>& rom = std::nullopt,
                     const std::string& manifest = {});
void save_checkpoint(const std::string& path, const HybridEsn& model,
                     const std::string& manifest = {});
Checkpoint load_checkpoint(const std::string& path);

RomSection rom_section(const HybridEsn& model);

}  // namespace hesn
