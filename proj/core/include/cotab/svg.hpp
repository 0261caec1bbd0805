#pragma once

#include <string>

#include "cotab/pca.hpp"

namespace cotab {

/// Render a rank-2 biplot as a standalone SVG: origin-centered axes labeled
/// "PC1 (xx.x%)" / "PC2 (xx.x%)", loading arrows labeled "row:col", score
/// points labeled with sample ids. Element order and number formatting are
/// deterministic, so identical geometry yields identical bytes.
///
/// Data coordinates map to pixels as
///   px = center + scale * x,  py = center - scale * y
/// with the viewport center and scale recorded in the SVG <desc> element.
std::string render_biplot_svg(const BiplotGeometry& geom, const std::string& title = {});

/// Render and write atomically (write to a temporary file, then rename).
void emit_biplot_svg(const BiplotGeometry& geom, const std::string& path,
                     const std::string& title = {});

} // namespace cotab
