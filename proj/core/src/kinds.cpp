#include "sit/kinds.hpp"

namespace sit {

std::string_view kind_name(BasicKind k) {
    switch (k) {
        case BasicKind::Ind: return "IND";
        case BasicKind::Tim: return "TIM";
        case BasicKind::Loc: return "LOC";
        case BasicKind::Rel: return "REL";
        case BasicKind::Pol: return "POL";
        case BasicKind::Par: return "PAR";
        case BasicKind::Inf: return "INF";
        case BasicKind::Sit: return "SIT";
        case BasicKind::Typ: return "TYP";
    }
    return "?";
}

std::string kind_sigil_name(BasicKind k) {
    return "~" + std::string(kind_name(k));
}

std::optional<BasicKind> kind_from_name(std::string_view name) {
    if (!name.empty() && name.front() == '~') name.remove_prefix(1);
    for (BasicKind k : all_basic_kinds)
        if (name == kind_name(k)) return k;
    return std::nullopt;
}

}  // namespace sit
