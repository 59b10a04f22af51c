#pragma once

#include <filesystem>

namespace epimob {

/// Renders fig1..fig6 (CSV + SVG) into out_dir from the artifact files a
/// pipeline run leaves in run_dir. Missing upstream files raise an error
/// naming the command that produces them. The CSVs are the contract; the
/// SVGs are plain axes+series renderings of the same data.
void emit_figures(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir);

} // namespace epimob
