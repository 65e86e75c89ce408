#pragma once

#include <string>

namespace modecap {

/// Outcome of one named check: measured value against its tolerance.
struct PropertyResult
{
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

} // namespace modecap
