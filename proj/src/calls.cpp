#include "botdetect/calls.hpp"

#include <array>
#include <utility>

namespace botdetect {
namespace {

constexpr std::array<std::pair<Call, std::string_view>, 14> kNames{{
    {Call::Socket, "socket"},
    {Call::Connect, "connect"},
    {Call::Send, "send"},
    {Call::SendTo, "sendto"},
    {Call::Recv, "recv"},
    {Call::RecvFrom, "recvfrom"},
    {Call::CreateFile, "CreateFile"},
    {Call::OpenFile, "OpenFile"},
    {Call::ReadFile, "ReadFile"},
    {Call::WriteFile, "WriteFile"},
    {Call::GetAsyncKeyState, "GetAsyncKeyState"},
    {Call::GetKeyboardState, "GetKeyboardState"},
    {Call::GetKeyNameText, "GetKeyNameText"},
    {Call::KeybdEvent, "keybd_event"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view call_name(Call call) {
  for (const auto& [c, name] : kNames)
    if (c == call) return name;
  return "?";
}

std::optional<Call> call_from_name(std::string_view name) {
  name = trim(name);
  if (name.ends_with("()")) name = trim(name.substr(0, name.size() - 2));
  // Common misspelling, accepted on input.
  if (name == "GetAsyncKeyStat") return Call::GetAsyncKeyState;
  for (const auto& [c, n] : kNames)
    if (n == name) return c;
  return std::nullopt;
}

CallCategory category_of(Call call) {
  switch (call) {
    case Call::Socket:
    case Call::Connect:
    case Call::Send:
    case Call::SendTo:
    case Call::Recv:
    case Call::RecvFrom:
      return CallCategory::Communication;
    case Call::CreateFile:
    case Call::OpenFile:
    case Call::ReadFile:
    case Call::WriteFile:
      return CallCategory::FileAccess;
    case Call::GetAsyncKeyState:
    case Call::GetKeyboardState:
    case Call::GetKeyNameText:
    case Call::KeybdEvent:
      return CallCategory::KeyboardStatus;
  }
  return CallCategory::FileAccess;
}

Direction direction_of(Call call) {
  switch (call) {
    case Call::Recv:
    case Call::RecvFrom:
      return Direction::Inbound;
    case Call::Socket:
    case Call::Connect:
    case Call::Send:
    case Call::SendTo:
      return Direction::Outbound;
    default:
      return Direction::None;
  }
}

std::string_view direction_name(Direction dir) {
  switch (dir) {
    case Direction::Inbound: return "inbound";
    case Direction::Outbound: return "outbound";
    case Direction::None: return "none";
  }
  return "none";
}

std::optional<Direction> direction_from_name(std::string_view name) {
  if (name == "inbound") return Direction::Inbound;
  if (name == "outbound") return Direction::Outbound;
  if (name == "none") return Direction::None;
  return std::nullopt;
}

}  // namespace botdetect
