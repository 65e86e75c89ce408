#pragma once

#include <stdexcept>
#include <string>

namespace modecap {

// Argument outside the mathematical domain of an operation (negative
// radius, |x| > 1 for Legendre, R = 0 where mode structure is undefined).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// Request would need more memory or nodes than the library supports.
class ResourceError : public std::length_error
{
public:
  using std::length_error::length_error;
};

// Spherical sampling too coarse for the requested mode order.
class ResolutionError : public std::runtime_error
{
public:
  ResolutionError(std::string const &what, int required_degree)
    : std::runtime_error(what), required_degree_(required_degree)
  {
  }

  int required_degree() const noexcept { return required_degree_; }

private:
  int required_degree_;
};

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace modecap
