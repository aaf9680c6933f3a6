#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "zd/core.hpp"

namespace zd {

enum class ActionKind : std::uint8_t { Move, Bomb };

/// One player turn: a move or a bomb thrown at the door in `dir`.
struct Action {
    ActionKind kind = ActionKind::Move;
    Side dir = Side::N;
    bool operator==(const Action&) const = default;
};

/// "MoveN".."MoveW", "BombN".."BombW".
std::string action_name(Action a);
std::optional<Action> action_from_name(std::string_view s);

}  // namespace zd
