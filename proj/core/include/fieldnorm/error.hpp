#pragma once

#include <stdexcept>
#include <string>

namespace fieldnorm {

/// Pipeline failure carrying a short, stable reason (e.g. "empty oeuvre")
/// and free-form detail. what() renders as "reason: detail".
class Error : public std::runtime_error {
 public:
  explicit Error(std::string reason, std::string detail = {});

  const std::string& reason() const noexcept { return reason_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string reason_;
  std::string detail_;
};

}  // namespace fieldnorm
