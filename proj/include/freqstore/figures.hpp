#pragma once

#include <string>
#include <string_view>
#include <vector>

// Regenerates the datasets behind the reference figures as CSV documents.

namespace freqstore {

struct FigureFile {
    std::string file_name;  // e.g. "fig3.csv"
    std::string csv;
};

const std::vector<std::string>& figure_ids();

/// Deterministic CSV output for one figure id (fig2, fig3, fig4, fig5, fig7,
/// fig8, fig9, fig10, fig11). Throws InvalidParameter for an unknown id.
std::vector<FigureFile> figure_data(std::string_view id, unsigned threads = 0);

}  // namespace freqstore
