#pragma once

#include <stdexcept>
#include <string>

namespace teager {

// Error categories. The CLI maps each category to a distinct exit status.
enum class ErrorKind {
  parameter,
  too_short,
  empty_result,
  degenerate,
  design,
  layout,
  stratification,
  undefined_class,
  undefined_auc,
  ingest,
  config,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace teager
