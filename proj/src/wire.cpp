#include "sep/wire.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

namespace sep {

Message Message::init(u64 sid, u64 n, u64 k, u64 e, u64 ciphertext, u64 held_root) {
  return Message{MsgType::init, sid, {n, k, e, ciphertext, held_root}};
}

Message Message::submit(u64 sid, u64 party_slot, u64 n, u64 k, u64 x) {
  return Message{MsgType::submit, sid, {party_slot, n, k, x}};
}

Message Message::reply(u64 sid, u64 root) { return Message{MsgType::reply, sid, {root}}; }

Message Message::report(u64 sid, bool found, u64 recovered) {
  return Message{MsgType::report, sid, {found ? u64{1} : u64{0}, recovered}};
}

Message Message::error(u64 sid, u64 code) { return Message{MsgType::error, sid, {code}}; }

std::size_t body_field_count(MsgType type) {
  switch (type) {
    case MsgType::init: return 5;
    case MsgType::submit: return 4;
    case MsgType::reply: return 1;
    case MsgType::report: return 2;
    case MsgType::error: return 1;
  }
  fail(Errc::unknown_tag, "unrecognized message tag");
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value >> 24));
  out.push_back(static_cast<std::uint8_t>(value >> 16));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value));
}

void put_u64(std::vector<std::uint8_t>& out, u64 value) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

u64 get_u64(std::span<const std::uint8_t> bytes, std::size_t offset) {
  u64 value = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    value = value << 8 | bytes[offset + i];
  }
  return value;
}

bool known_tag(std::uint8_t tag) { return tag >= 0x01 && tag <= 0x05; }

}  // namespace

std::vector<std::uint8_t> encode(const Message& msg) {
  std::size_t expected = body_field_count(msg.type);
  if (msg.body.size() != expected) fail(Errc::wrong_field_count, "body does not match tag");
  std::size_t payload = 1 + 8 + 8 * msg.body.size();
  if (payload > kMaxPayload) fail(Errc::oversize_frame, "payload exceeds frame limit");
  std::vector<std::uint8_t> out;
  out.reserve(4 + payload);
  put_u32(out, static_cast<std::uint32_t>(payload));
  out.push_back(static_cast<std::uint8_t>(msg.type));
  put_u64(out, msg.session_id);
  for (u64 field : msg.body) put_u64(out, field);
  return out;
}

Message decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) fail(Errc::truncated_frame, "missing length header");
  std::uint32_t length = std::uint32_t{bytes[0]} << 24 | std::uint32_t{bytes[1]} << 16 |
                         std::uint32_t{bytes[2]} << 8 | std::uint32_t{bytes[3]};
  if (length > kMaxPayload) fail(Errc::oversize_frame, "declared payload exceeds frame limit");
  if (bytes.size() < 4u + length) fail(Errc::truncated_frame, "payload shorter than declared");
  if (bytes.size() > 4u + length) fail(Errc::invalid_input, "trailing bytes after frame");
  if (length < 1 + 8) fail(Errc::truncated_frame, "payload too short for tag and session id");
  std::uint8_t tag = bytes[4];
  if (!known_tag(tag)) fail(Errc::unknown_tag, "unrecognized message tag");
  Message msg;
  msg.type = static_cast<MsgType>(tag);
  msg.session_id = get_u64(bytes, 5);
  std::size_t body_bytes = length - 9;
  if (body_bytes % 8 != 0 || body_bytes / 8 != body_field_count(msg.type)) {
    fail(Errc::wrong_field_count, "body does not match tag");
  }
  msg.body.resize(body_bytes / 8);
  for (std::size_t i = 0; i < msg.body.size(); ++i) {
    msg.body[i] = get_u64(bytes, 13 + 8 * i);
  }
  return msg;
}

namespace {

// Two queues shared by both ends; closing either end closes the pipe.
class LoopbackState {
 public:
  void push(int dir, const Message& msg) {
    std::lock_guard lock(mutex_);
    if (closed_) fail(Errc::transport_failure, "pipe closed");
    queues_[dir].push_back(msg);
    cv_.notify_all();
  }

  RecvStatus pop(int dir, Message& out, std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return !queues_[dir].empty() || closed_; });
    if (!queues_[dir].empty()) {
      out = queues_[dir].front();
      queues_[dir].pop_front();
      return RecvStatus::ok;
    }
    return closed_ ? RecvStatus::closed : RecvStatus::timeout;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Message> queues_[2];
  bool closed_ = false;
};

class LoopbackChannel : public Channel {
 public:
  LoopbackChannel(std::shared_ptr<LoopbackState> state, int read_dir)
      : state_(std::move(state)), read_dir_(read_dir) {}

  void send(const Message& msg) override {
    // Round-trip through the codec so loopback exercises the same bytes as
    // TCP.
    state_->push(1 - read_dir_, decode(encode(msg)));
  }

  RecvStatus recv(Message& out, std::chrono::milliseconds timeout) override {
    return state_->pop(read_dir_, out, timeout);
  }

  void close() override { state_->close(); }

 private:
  std::shared_ptr<LoopbackState> state_;
  int read_dir_;
};

}  // namespace

LoopbackPipe make_loopback() {
  auto state = std::make_shared<LoopbackState>();
  return LoopbackPipe{std::make_shared<LoopbackChannel>(state, 0),
                      std::make_shared<LoopbackChannel>(state, 1)};
}

namespace {

Message recv_or_fail(Channel& ch, std::chrono::milliseconds timeout, const char* who) {
  Message msg;
  switch (ch.recv(msg, timeout)) {
    case RecvStatus::ok: return msg;
    case RecvStatus::timeout:
      fail(Errc::transport_failure, std::string("timed out waiting for ") + who);
    case RecvStatus::closed:
      fail(Errc::transport_failure, std::string("channel closed while waiting for ") + who);
  }
  fail(Errc::transport_failure, "unreachable");
}

void verify_report(const Message& report, const PartyResult& expected, const char* who) {
  if (report.type == MsgType::error) {
    fail(Errc::protocol_violation,
         std::string(who) + " reported error code " + std::to_string(report.body[0]));
  }
  if (report.type != MsgType::report) {
    fail(Errc::protocol_violation, std::string("unexpected message from ") + who);
  }
  bool found = report.body[0] == 1;
  u64 recovered = report.body[1];
  if (found != expected.success() || recovered != expected.recovered.value_or(0)) {
    fail(Errc::protocol_violation, std::string(who) + " report disagrees with replay");
  }
}

}  // namespace

SessionTranscript drive_session(const SessionConfig& cfg, u64 sid) {
  u64 seed = session_seed(cfg.master_seed, sid);
  Rng ca_rng(stream_seed(seed, Stream::ca));
  ProtocolParams params = ca_setup(cfg.s, cfg.k, cfg.e, cfg.m, ca_rng);
  return run_session(params, policy_for(params.setup), sid, seed);
}

std::vector<SessionTranscript> ca_role(Channel& alice, Channel& bob,
                                       const SessionConfig& cfg) {
  std::vector<SessionTranscript> transcripts;
  transcripts.reserve(cfg.sessions);
  for (u64 sid = 0; sid < cfg.sessions; ++sid) {
    // The session is deterministic in its seed, so CA can replay it and hold
    // the parties' reports to the expected results.
    SessionTranscript expected = drive_session(cfg, sid);
    const ProtocolParams& params = expected.params;
    alice.send(Message::init(sid, cfg.s.n, cfg.k, cfg.e, params.c, params.held_alice));
    bob.send(Message::init(sid, cfg.s.n, cfg.k, cfg.e, params.c, params.held_bob));

    verify_report(recv_or_fail(alice, cfg.timeout, "alice report"), expected.alice, "alice");
    verify_report(recv_or_fail(bob, cfg.timeout, "bob report"), expected.bob, "bob");
    transcripts.push_back(std::move(expected));
  }
  alice.close();
  bob.close();
  return transcripts;
}

void re_role(Channel& first, Channel& second, const Semiprime& s, u64 master_seed,
             std::chrono::milliseconds timeout) {
  while (true) {
    Message m1;
    RecvStatus st1 = first.recv(m1, timeout);
    if (st1 == RecvStatus::closed) return;  // parties are done
    if (st1 == RecvStatus::timeout) {
      second.send(Message::error(0, kErrTimeout));
      fail(Errc::transport_failure, "timed out waiting for first submit");
    }
    Message m2;
    RecvStatus st2 = second.recv(m2, timeout);
    if (st2 != RecvStatus::ok) {
      first.send(Message::error(m1.session_id, kErrTimeout));
      fail(Errc::transport_failure, "timed out waiting for second submit");
    }

    u64 sid = m1.session_id;
    auto reject = [&](u64 code, const char* why) {
      first.send(Message::error(sid, code));
      second.send(Message::error(sid, code));
      fail(Errc::protocol_violation, why);
    };
    if (m1.type != MsgType::submit || m2.type != MsgType::submit || m2.session_id != sid) {
      reject(kErrMismatchedSubmit, "expected a matched pair of submits");
    }
    u64 slot1 = m1.body[0], slot2 = m2.body[0];
    if (slot1 == slot2 || slot1 > 1 || slot2 > 1) {
      reject(kErrDuplicateSlot, "party slots must be {0, 1}");
    }
    if (m1.body[1] != s.n || m2.body[1] != s.n || m1.body[2] != m2.body[2]) {
      reject(kErrMismatchedSubmit, "modulus or degree disagreement");
    }
    if (m1.body[3] != m2.body[3]) {
      reject(kErrMismatchedSubmit, "submitted values differ");
    }

    u64 k = m1.body[2];
    u64 x = m1.body[3];
    GameSetup setup{s, k};
    Rng rng(stream_seed(session_seed(master_seed, sid), Stream::re));
    auto pair = re_reply(x, setup, policy_for(setup), rng);

    Channel& to_alice = slot1 == 0 ? first : second;
    Channel& to_bob = slot1 == 0 ? second : first;
    to_alice.send(Message::reply(sid, pair.first));
    to_bob.send(Message::reply(sid, pair.second));
  }
}

void party_role(Channel& ca, Channel& re, u64 party_slot,
                std::chrono::milliseconds timeout) {
  while (true) {
    Message init;
    RecvStatus status = ca.recv(init, timeout);
    if (status == RecvStatus::closed) {
      re.close();
      return;
    }
    if (status == RecvStatus::timeout) fail(Errc::transport_failure, "no init from CA");
    if (init.type != MsgType::init) fail(Errc::protocol_violation, "expected init");

    u64 sid = init.session_id;
    u64 n = init.body[0], k = init.body[1], e = init.body[2];
    u64 ciphertext = init.body[3], held = init.body[4];
    if (n < 2 || gcd(held, n) != 1) fail(Errc::protocol_violation, "unusable init parameters");

    re.send(Message::submit(sid, party_slot, n, k, powmod(held, k, n)));

    Message reply = recv_or_fail(re, timeout, "root reply");
    if (reply.type == MsgType::error) {
      ca.send(Message::error(sid, reply.body[0]));
      fail(Errc::protocol_violation, "root extractor rejected the session");
    }
    if (reply.type != MsgType::reply) fail(Errc::protocol_violation, "expected reply");

    std::optional<u64> factor = attempt_factor(held, reply.body[0], n);
    u64 recovered = factor ? recover_secret(*factor, n, e, ciphertext) : 0;
    ca.send(Message::report(sid, factor.has_value(), recovered));
  }
}

std::vector<SessionTranscript> run_local_exchange(const SessionConfig& cfg) {
  auto ca_alice = make_loopback();
  auto ca_bob = make_loopback();
  auto re_alice = make_loopback();
  auto re_bob = make_loopback();

  std::exception_ptr worker_error;
  std::mutex error_mutex;
  auto guard = [&](auto&& fn) {
    return [&, fn] {
      try {
        fn();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!worker_error) worker_error = std::current_exception();
      }
    };
  };

  std::thread re_thread(guard([&] {
    re_role(*re_alice.b, *re_bob.b, cfg.s, cfg.master_seed, cfg.timeout);
  }));
  std::thread alice_thread(guard([&] {
    party_role(*ca_alice.b, *re_alice.a, 0, cfg.timeout);
  }));
  std::thread bob_thread(guard([&] {
    party_role(*ca_bob.b, *re_bob.a, 1, cfg.timeout);
  }));

  std::vector<SessionTranscript> transcripts;
  std::exception_ptr ca_error;
  try {
    transcripts = ca_role(*ca_alice.a, *ca_bob.a, cfg);
  } catch (...) {
    ca_error = std::current_exception();
    ca_alice.a->close();
    ca_bob.a->close();
    re_alice.a->close();
    re_bob.a->close();
  }
  alice_thread.join();
  bob_thread.join();
  re_thread.join();
  if (ca_error) std::rethrow_exception(ca_error);
  if (worker_error) std::rethrow_exception(worker_error);
  return transcripts;
}

}  // namespace sep
