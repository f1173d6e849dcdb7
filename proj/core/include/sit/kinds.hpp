#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sit {

// The nine primitive kinds. Every named entity in an environment has
// exactly one of these as its basic kind; the kind of a kind is Typ.
enum class BasicKind : std::uint8_t {
    Ind,  // individuals
    Tim,  // temporal locations
    Loc,  // spatial locations
    Rel,  // relations
    Pol,  // polarities
    Par,  // parameters
    Inf,  // infons
    Sit,  // situations
    Typ,  // types
};

inline constexpr std::array<BasicKind, 9> all_basic_kinds = {
    BasicKind::Ind, BasicKind::Tim, BasicKind::Loc,
    BasicKind::Rel, BasicKind::Pol, BasicKind::Par,
    BasicKind::Inf, BasicKind::Sit, BasicKind::Typ,
};

// Sigil-free internal name ("IND", "SIT", ...).
std::string_view kind_name(BasicKind k);

// Concrete-syntax spelling ("~IND", "~SIT", ...).
std::string kind_sigil_name(BasicKind k);

// Accepts either spelling, with or without the leading '~'.
std::optional<BasicKind> kind_from_name(std::string_view name);

}  // namespace sit
