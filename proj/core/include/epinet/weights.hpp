#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace epinet {

enum class WeightMode { Random, Fixed };

std::string_view to_string(WeightMode mode);
WeightMode weight_mode_from_string(std::string_view text);

/// The weight alphabet of a network together with how weights are laid out.
///
/// Random mode: every edge independently draws class i with probability
/// probs[i]. Fixed mode: every node owns exactly counts[i] edges of class i.
/// In both modes `degree` is the number of links per node (the mean degree
/// for non-homogeneous topologies).
struct WeightClasses {
    WeightMode mode = WeightMode::Random;
    std::vector<double> weights;
    std::vector<double> probs;
    std::vector<int> counts;
    int degree = 0;

    static WeightClasses random(int degree, std::vector<double> weights, std::vector<double> probs);
    static WeightClasses fixed(std::vector<double> weights, std::vector<int> counts);

    std::size_t size() const noexcept { return weights.size(); }

    /// Fraction of a node's links that belong to class m: p_m or k_m / k.
    double class_fraction(std::size_t m) const;

    /// Expected link weight, sum over classes of fraction * weight.
    double average_weight() const;

    /// Throws InvalidArgument when an invariant does not hold.
    void validate() const;
};

} // namespace epinet
