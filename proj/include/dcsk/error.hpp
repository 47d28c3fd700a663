#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dcsk {

/// Raised when a caller violates an operation's precondition.
class ContractError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by configuration parsing/validation. Carries every violated
/// invariant, not just the first one found.
class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations))
    {
    }

    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& items)
    {
        std::string out = "invalid configuration:";
        for (const auto& item : items) {
            out += "\n  - ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

inline void require(bool condition, const char* message)
{
    if (!condition) {
        throw ContractError(message);
    }
}

}  // namespace dcsk
