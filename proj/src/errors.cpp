#include "adelix/errors.hpp"

namespace adelix {

void throw_usage(const std::string& msg) { throw AdxError(ErrKind::usage, msg); }
void throw_math(const std::string& msg) { throw AdxError(ErrKind::math, msg); }
void throw_precision(const std::string& msg, std::optional<std::string> hint) {
    throw AdxError(ErrKind::precision, msg, std::move(hint));
}

}  // namespace adelix
