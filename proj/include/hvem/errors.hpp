#pragma once

#include <stdexcept>
#include <string>

namespace hvem
{

/// Raised when a numerical step fails (singular or indefinite system, residual too large).
class NumericalError : public std::runtime_error
{
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hvem
