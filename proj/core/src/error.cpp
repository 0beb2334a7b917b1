#include "motionsplice/error.h"

namespace motionsplice {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      message_(message),
      line_(line),
      column_(column) {}

}  // namespace motionsplice
