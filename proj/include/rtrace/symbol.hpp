#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>

namespace rtrace {

/// True for identifiers reserved by the textual grammars (these can never
/// be event symbol names).
bool is_reserved_word(std::string_view word);

/// An event symbol: the label of a propagation between a component and its
/// environment.  Two symbols are equal iff their names are equal.
///
/// Names are identifiers: nonempty, alphanumeric plus underscore, starting
/// with a letter or underscore, and not a grammar keyword.
class Symbol {
public:
    explicit Symbol(std::string name);

    const std::string& name() const noexcept { return name_; }

    bool operator==(const Symbol&) const = default;
    auto operator<=>(const Symbol&) const = default;

private:
    std::string name_;
};

using SymbolSet = std::set<Symbol>;

}  // namespace rtrace
