#include "matmi/error.hpp"

#include <utility>

namespace matmi {

DegenerateElementError::DegenerateElementError(std::size_t element, double signed_area)
    : PreconditionError("degenerate element " + std::to_string(element) + " (signed area "
                        + std::to_string(signed_area) + ")"),
      element_(element),
      signed_area_(signed_area)
{
}

InadmissibleConductivityError::InadmissibleConductivityError(const std::string& what,
                                                             std::size_t node, double value)
    : PreconditionError(what + " at node " + std::to_string(node) + " (value "
                        + std::to_string(value) + ")"),
      node_(node),
      value_(value)
{
}

SolverError::SolverError(const std::string& what, std::vector<double> residual_history)
    : Error(what), history_(std::move(residual_history))
{
}

ConfigError::ConfigError(const std::string& what, std::string key, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      key_(std::move(key)),
      line_(line)
{
}

} // namespace matmi
