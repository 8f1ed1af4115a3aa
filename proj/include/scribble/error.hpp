#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scribble {

/// A rule violation found by scene validation. `rule` is a stable kebab-case name.
struct Diagnostic {
    std::string rule;
    std::string subject;  // id of the offending entity, empty for scene-level rules
    std::string detail;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Thrown by operations with a named failure mode. `code()` is the stable
/// machine-readable name ("empty-mask", "schema(version)", "frame-gap", ...).
class Error : public std::runtime_error {
public:
    explicit Error(std::string code, const std::string& message = {},
                   std::vector<Diagnostic> diagnostics = {})
        : std::runtime_error(message.empty() ? code : code + ": " + message),
          code_(std::move(code)),
          diagnostics_(std::move(diagnostics)) {}

    const std::string& code() const noexcept { return code_; }
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::string code_;
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace scribble
