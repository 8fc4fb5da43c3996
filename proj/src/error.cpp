#include "aefuse/error.hpp"

#include <iostream>

namespace aefuse {

namespace {

void stderr_handler(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

WarningHandler g_handler = &stderr_handler;

}  // namespace

void warn(const std::string& message) { g_handler(message); }

WarningHandler set_warning_handler(WarningHandler handler) {
    WarningHandler previous = g_handler;
    g_handler = handler ? handler : &stderr_handler;
    return previous;
}

}  // namespace aefuse
