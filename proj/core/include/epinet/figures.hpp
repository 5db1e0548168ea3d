#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace epinet {

struct FigureOptions {
    std::size_t runs = 100;  ///< simulations per curve; 0 writes pairwise curves only
    std::uint64_t seed = 1;
    std::size_t nodes = 1000;
    unsigned threads = 0;
    std::size_t grid_points = 201;
};

struct FigureCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct FigureBundle {
    std::string name;
    std::vector<std::filesystem::path> files;  ///< CSV curves plus manifest.json
    std::vector<FigureCheck> checks;            ///< qualitative orderings the figure should show
};

inline constexpr std::string_view kFigureNames[] = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};

/// Writes every curve of the named figure into out_dir with a manifest.json
/// listing the parameters of each curve. Throws ConfigError for unknown names.
FigureBundle reproduce_figure(std::string_view name, const std::filesystem::path& out_dir,
                              const FigureOptions& options = {});

} // namespace epinet
