#pragma once

#include <optional>
#include <string_view>

namespace botdetect {

/// Monitored function calls: communication, file access and keyboard status.
enum class Call {
  Socket,
  Connect,
  Send,
  SendTo,
  Recv,
  RecvFrom,
  CreateFile,
  OpenFile,
  ReadFile,
  WriteFile,
  GetAsyncKeyState,
  GetKeyboardState,
  GetKeyNameText,
  KeybdEvent,
};

enum class CallCategory { Communication, FileAccess, KeyboardStatus };

enum class Direction { Inbound, Outbound, None };

inline constexpr Call kAllCalls[] = {
    Call::Socket,     Call::Connect,  Call::Send,     Call::SendTo,           Call::Recv,
    Call::RecvFrom,   Call::CreateFile, Call::OpenFile, Call::ReadFile,       Call::WriteFile,
    Call::GetAsyncKeyState, Call::GetKeyboardState, Call::GetKeyNameText, Call::KeybdEvent,
};

std::string_view call_name(Call call);

/// Accepts the bare name or the name followed by "()"; surrounding blanks
/// are ignored. "GetAsyncKeyStat" is accepted as GetAsyncKeyState.
std::optional<Call> call_from_name(std::string_view name);

CallCategory category_of(Call call);

/// recv/recvfrom are inbound, send/sendto/socket/connect outbound, the rest none.
Direction direction_of(Call call);

inline bool is_keyboard_status(Call call) { return category_of(call) == CallCategory::KeyboardStatus; }

/// Data-carrying sends that close a send-after-receive pair.
inline bool is_data_send(Call call) { return call == Call::Send || call == Call::SendTo; }

inline bool is_receive(Call call) { return call == Call::Recv || call == Call::RecvFrom; }

std::string_view direction_name(Direction dir);
std::optional<Direction> direction_from_name(std::string_view name);

}  // namespace botdetect
