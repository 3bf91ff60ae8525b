#include "fieldnorm/error.hpp"

namespace fieldnorm {

Error::Error(std::string reason, std::string detail)
    : std::runtime_error(detail.empty() ? reason : reason + ": " + detail),
      reason_(std::move(reason)),
      detail_(std::move(detail)) {}

}  // namespace fieldnorm
