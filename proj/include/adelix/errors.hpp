#pragma once
#include <optional>
#include <stdexcept>
#include <string>

namespace adelix {

/* Error taxonomy mirrors the CLI exit-code contract:
 *   usage     -> exit 2 (bad input, parse error, domain violation)
 *   math      -> exit 1 (a checked theorem failed; that is a bug, not bad input)
 *   precision -> exit 3 (window or digit budget too small; hint says what would suffice)
 */
enum class ErrKind { usage, math, precision };

class AdxError : public std::runtime_error {
public:
    AdxError(ErrKind k, const std::string& msg, std::optional<std::string> hint = std::nullopt)
        : std::runtime_error(msg), kind(k), hint(std::move(hint)) {}
    ErrKind kind;
    std::optional<std::string> hint;  // for precision errors: minimal sufficient window when computable
};

[[noreturn]] void throw_usage(const std::string& msg);
[[noreturn]] void throw_math(const std::string& msg);
[[noreturn]] void throw_precision(const std::string& msg, std::optional<std::string> hint = std::nullopt);

}  // namespace adelix
