#include "rtrace/symbol.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace rtrace {

bool is_reserved_word(std::string_view word) {
    static constexpr std::array<std::string_view, 6> kReserved = {
        "eps", "pref", "component", "inputs", "outputs", "spec",
    };
    for (auto r : kReserved) {
        if (word == r) return true;
    }
    return false;
}

Symbol::Symbol(std::string name) : name_(std::move(name)) {
    auto fail = [&](const char* why) {
        throw std::invalid_argument("invalid symbol name '" + name_ + "': " + why);
    };
    if (name_.empty()) fail("empty");
    const unsigned char first = static_cast<unsigned char>(name_.front());
    if (!std::isalpha(first) && first != '_') fail("must start with a letter or underscore");
    for (char ch : name_) {
        const unsigned char u = static_cast<unsigned char>(ch);
        if (!std::isalnum(u) && u != '_') fail("may contain only letters, digits and underscores");
    }
    if (is_reserved_word(name_)) fail("reserved keyword");
}

}  // namespace rtrace
