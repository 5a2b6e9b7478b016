#pragma once

#include <stdexcept>
#include <string>

namespace didolocus {

/// Every failure raised by the library carries one of the documented messages,
/// optionally followed by context after a colon.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace didolocus
