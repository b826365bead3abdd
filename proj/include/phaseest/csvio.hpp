// csvio.hpp — plot-ready CSV emission with a '#'-prefixed metadata header
// block, plus standalone key=value metadata files. Comma-separated, '.'
// decimal, LF line endings, UTF-8. Bodies are byte-identical across reruns
// of the same configuration; wall-clock entries belong in the standalone
// metadata file only.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "phaseest/analysis.hpp"
#include "phaseest/phasecore.hpp"

namespace phaseest {

using MetadataBlock = std::vector<std::pair<std::string, std::string>>;

/// Deterministic shortest-roundtrip decimal rendering.
std::string format_double(double v);

/// Columns: n,sigma2,stderr,trials,diffuse_count.
void write_curve_csv(const std::string& path, const MetadataBlock& meta,
                     const VarianceCurve& curve);

/// Columns: theta,expectation,stderr.
void write_scan_csv(const std::string& path, const MetadataBlock& meta,
                    const std::vector<double>& thetas, const std::vector<double>& expectations,
                    const std::vector<double>& stderrs);

/// Columns: phi_bin,density.
void write_posterior_csv(const std::string& path, const MetadataBlock& meta,
                         const PosteriorGrid1D& grid);

/// key=value lines, one per entry.
void write_metadata_file(const std::string& path, const MetadataBlock& meta);

}  // namespace phaseest
