#include "epinet/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace epinet {

std::string csv_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (value == 0.0)
        return "0";  // folds -0 as well
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

} // namespace epinet
