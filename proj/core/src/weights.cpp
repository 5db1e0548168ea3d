#include "epinet/weights.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "epinet/errors.hpp"

namespace epinet {

std::string_view to_string(WeightMode mode)
{
    return mode == WeightMode::Random ? "random" : "fixed";
}

WeightMode weight_mode_from_string(std::string_view text)
{
    if (text == "random")
        return WeightMode::Random;
    if (text == "fixed")
        return WeightMode::Fixed;
    throw InvalidArgument("unknown weight mode '" + std::string(text) + "' (expected random|fixed)");
}

WeightClasses WeightClasses::random(int degree, std::vector<double> weights, std::vector<double> probs)
{
    WeightClasses wc;
    wc.mode = WeightMode::Random;
    wc.degree = degree;
    wc.weights = std::move(weights);
    wc.probs = std::move(probs);
    wc.validate();
    return wc;
}

WeightClasses WeightClasses::fixed(std::vector<double> weights, std::vector<int> counts)
{
    WeightClasses wc;
    wc.mode = WeightMode::Fixed;
    wc.weights = std::move(weights);
    wc.counts = std::move(counts);
    wc.degree = std::accumulate(wc.counts.begin(), wc.counts.end(), 0);
    wc.validate();
    return wc;
}

double WeightClasses::class_fraction(std::size_t m) const
{
    if (m >= size())
        throw InvalidArgument("weight class index out of range");
    if (mode == WeightMode::Random)
        return probs[m];
    return static_cast<double>(counts[m]) / static_cast<double>(degree);
}

double WeightClasses::average_weight() const
{
    double sum = 0.0;
    for (std::size_t m = 0; m < size(); ++m)
        sum += class_fraction(m) * weights[m];
    return sum;
}

void WeightClasses::validate() const
{
    if (weights.empty())
        throw InvalidArgument("weight classes: at least one weight is required");
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw InvalidArgument("weight classes: weights must be positive and finite");
    }
    if (degree < 1)
        throw InvalidArgument("weight classes: degree must be a positive integer");

    if (mode == WeightMode::Random) {
        if (probs.size() != weights.size())
            throw InvalidArgument("weight classes: probs and weights differ in length");
        double total = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0 && p <= 1.0))
                throw InvalidArgument("weight classes: probabilities must lie in [0, 1]");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidArgument("weight classes: probabilities must sum to 1");
    } else {
        if (counts.size() != weights.size())
            throw InvalidArgument("weight classes: counts and weights differ in length");
        int total = 0;
        for (int c : counts) {
            if (c < 0)
                throw InvalidArgument("weight classes: per-class counts must be non-negative");
            total += c;
        }
        if (total != degree)
            throw InvalidArgument("weight classes: per-class counts must sum to the degree");
    }
}

} // namespace epinet
