#include "teager/error.hpp"

namespace teager {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::too_short: return "too-short";
    case ErrorKind::empty_result: return "empty-result";
    case ErrorKind::degenerate: return "degenerate-input";
    case ErrorKind::design: return "design";
    case ErrorKind::layout: return "layout";
    case ErrorKind::stratification: return "stratification";
    case ErrorKind::undefined_class: return "undefined-class";
    case ErrorKind::undefined_auc: return "undefined-auc";
    case ErrorKind::ingest: return "ingest";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace teager
