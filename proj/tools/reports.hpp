#pragma once

// Shared CSV/SVG/sidecar emitters used by the subcommands and the pipeline.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wfp/chart.hpp"
#include "wfp/eval.hpp"
#include "wfp/remediate.hpp"

namespace wfp::cli {

inline constexpr const char* kToolVersion = "0.1.0";

std::string hex64(std::uint64_t v);
std::string fmt(double v);

/// CSV with header row, UTF-8, \n line endings, cells already formatted.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Writes (or merges into) <artifact>.meta.json: config hash, seed, versions.
/// Never records wall-clock times, so sidecars are byte-stable across reruns.
void write_sidecar(const std::filesystem::path& artifact, std::uint64_t config_hash,
                   std::uint64_t seed);

void write_characterization_reports(const CharacterizationReport& rep,
                                    const std::filesystem::path& outdir, bool charts,
                                    std::uint64_t config_hash, std::uint64_t seed);

void write_savings_report(const SavingsCurve& curve, const std::filesystem::path& path,
                          std::uint64_t config_hash, std::uint64_t seed);
void write_savings_chart(const SavingsCurve& curve, const std::filesystem::path& path);

void write_sweep_report(const SweepReport& rep, const std::filesystem::path& path,
                        std::uint64_t config_hash, std::uint64_t seed);

}  // namespace wfp::cli
