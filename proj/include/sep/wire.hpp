#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sep/protocol.hpp"

namespace sep {

// Wire format: 4-byte big-endian payload length, then the payload:
// 1-byte tag, 8-byte big-endian session id, and a fixed number of 8-byte
// big-endian fields per tag.
enum class MsgType : std::uint8_t {
  init = 0x01,    // CA -> party: N, k, e, ciphertext, held_root
  submit = 0x02,  // party -> RE: party_slot, N, k, x
  reply = 0x03,   // RE -> party: root
  report = 0x04,  // party -> CA: found_flag, recovered
  error = 0x05,   // any: code
};

inline constexpr std::size_t kMaxPayload = 4096;

// Session-terminal error codes.
inline constexpr u64 kErrMismatchedSubmit = 1;
inline constexpr u64 kErrDuplicateSlot = 2;
inline constexpr u64 kErrTimeout = 3;

struct Message {
  MsgType type = MsgType::error;
  u64 session_id = 0;
  std::vector<u64> body;

  static Message init(u64 sid, u64 n, u64 k, u64 e, u64 ciphertext, u64 held_root);
  static Message submit(u64 sid, u64 party_slot, u64 n, u64 k, u64 x);
  static Message reply(u64 sid, u64 root);
  static Message report(u64 sid, bool found, u64 recovered);
  static Message error(u64 sid, u64 code);

  friend bool operator==(const Message&, const Message&) = default;
};

// Fields each tag carries after the session id.
std::size_t body_field_count(MsgType type);

// Canonical frame bytes for one message.
std::vector<std::uint8_t> encode(const Message& msg);

// Parses exactly one frame; the buffer must contain the whole frame and
// nothing else.
Message decode(std::span<const std::uint8_t> bytes);

enum class RecvStatus { ok, timeout, closed };

// One endpoint of a bidirectional message pipe. TCP and in-process loopback
// both implement this, so the role loops are transport-agnostic.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const Message& msg) = 0;
  virtual RecvStatus recv(Message& out, std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;
};

// In-process pipe; `a` and `b` are the two ends.
struct LoopbackPipe {
  std::shared_ptr<Channel> a;
  std::shared_ptr<Channel> b;
};

LoopbackPipe make_loopback();

inline constexpr std::chrono::milliseconds kDefaultTimeout{10000};

struct SessionConfig {
  Semiprime s;
  u64 k = 3;
  u64 e = 7;
  u64 m = 2;
  u64 master_seed = 0;
  u64 sessions = 1;
  std::chrono::milliseconds timeout = kDefaultTimeout;
};

// The full deterministic session pipeline for one session id: derive the
// session seed, run CA setup, then the submit/reply/factor/recover round.
// Both the in-process runner and the networked CA go through this, which is
// what keeps their transcripts identical for the same master seed.
SessionTranscript drive_session(const SessionConfig& cfg, u64 sid);

// CA: per session, derives parameters, sends INITs, collects both REPORTs and
// checks them against the deterministic replay of the session. Closes both
// channels when done.
std::vector<SessionTranscript> ca_role(Channel& alice, Channel& bob,
                                       const SessionConfig& cfg);

// RE: rendezvous on the two SUBMITs of each session, validates them (equal x,
// slots {0,1}), then replies with a root pair drawn from its seeded
// generator. Serves until both channels close.
void re_role(Channel& first, Channel& second, const Semiprime& s, u64 master_seed,
             std::chrono::milliseconds timeout = kDefaultTimeout);

// Alice or Bob: consumes INITs until CA closes the channel; per session
// submits x, waits for the root, tries to factor and recover, reports back.
// Never sees the factors of N except through the gcd step.
void party_role(Channel& ca, Channel& re, u64 party_slot,
                std::chrono::milliseconds timeout = kDefaultTimeout);

// Runs all four roles over loopback pipes in one process.
std::vector<SessionTranscript> run_local_exchange(const SessionConfig& cfg);

}  // namespace sep
