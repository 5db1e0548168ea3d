#pragma once

#include <string>

namespace epinet {

/// Shortest decimal text that reads back to exactly the same double.
std::string csv_number(double value);

} // namespace epinet
