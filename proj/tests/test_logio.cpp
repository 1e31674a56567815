#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "botdetect/logio.hpp"
#include "test_util.hpp"

using namespace botdetect;
using testutil::error_of;

TEST(ParseSigRecord, ExampleLine) {
  const auto r = logio::parse_sig_record("<0001> <signal> <11> <32> <89>");
  EXPECT_EQ(r, (SignalRecord{1, 11, 32, 89}));
}

TEST(ParseSigRecord, AllZero) {
  EXPECT_EQ(logio::parse_sig_record("<0000> <signal> <0> <0> <0>"), (SignalRecord{0, 0, 0, 0}));
}

TEST(ParseSigRecord, OutOfRange) {
  EXPECT_EQ(error_of([] { logio::parse_sig_record("<0003> <signal> <150> <0> <0>"); }),
            Errc::OutOfRange);
  EXPECT_EQ(error_of([] { logio::parse_sig_record("<0003> <signal> <0> <-1> <0>"); }),
            Errc::OutOfRange);
}

TEST(ParseSigRecord, Malformed) {
  for (const char* line : {"<0001> <signal> <11> <32>", "<0001> <signal> <11> <32> <89> <1>",
                           "<0001> <antigen> <11> <32> <89>", "<0001> <signal> <x> <32> <89>",
                           "0001 signal 11 32 89", "<0001> <signal> <11> <32> <89", "",
                           "<-1> <signal> <1> <2> <3>", "<0001> <signal> <nan> <2> <3>"})
    EXPECT_EQ(error_of([&] { logio::parse_sig_record(line); }), Errc::MalformedLine) << line;
}

TEST(ParseSigRecord, SpacesInsideBrackets) {
  EXPECT_EQ(logio::parse_sig_record("<0001> < signal > <11> <32> <89>"),
            (SignalRecord{1, 11, 32, 89}));
}

TEST(ParseAntigenRecord, ExampleLine) {
  EXPECT_EQ(logio::parse_antigen_record("<0002> <antigen> <722> <GetAsyncKeyState()>"),
            (AntigenRecord{2, 722, Call::GetAsyncKeyState}));
}

TEST(ParseAntigenRecord, MisspelledExampleAccepted) {
  EXPECT_EQ(logio::parse_antigen_record("<0002> < antigen > <722> <GetAsyncKeyStat()>"),
            (AntigenRecord{2, 722, Call::GetAsyncKeyState}));
}

TEST(ParseAntigenRecord, SendTo) {
  EXPECT_EQ(logio::parse_antigen_record("<0010> <antigen> <722> <sendto()>"),
            (AntigenRecord{10, 722, Call::SendTo}));
  EXPECT_EQ(logio::parse_antigen_record("<0010> <antigen> <722> <sendto>"),
            (AntigenRecord{10, 722, Call::SendTo}));
}

TEST(ParseAntigenRecord, ZeroPidIsMalformed) {
  EXPECT_EQ(error_of([] { logio::parse_antigen_record("<0010> <antigen> <0> <send()>"); }),
            Errc::MalformedLine);
}

TEST(ParseAntigenRecord, UnknownCallNamed) {
  try {
    logio::parse_antigen_record("<0010> <antigen> <5> <fork()>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownCall);
    EXPECT_NE(std::string(e.what()).find("fork"), std::string::npos);
  }
}

TEST(ParseEvent, Dispatch) {
  EXPECT_TRUE(std::holds_alternative<SignalRecord>(logio::parse_event("<0001> <signal> <1> <2> <3>")));
  EXPECT_TRUE(std::holds_alternative<AntigenRecord>(logio::parse_event("<0001> <antigen> <7> <recv()>")));
  EXPECT_EQ(error_of([] { logio::parse_event("<0001> <other> <7>"); }), Errc::MalformedLine);
}

TEST(Format, Canonical) {
  EXPECT_EQ(logio::format_sig_record({1, 11, 32, 89}), "<0001> <signal> <11> <32> <89>");
  EXPECT_EQ(logio::format_sig_record({12345, 68.5, 0, 100}), "<12345> <signal> <68.5> <0> <100>");
  EXPECT_EQ(logio::format_antigen_record({2, 722, Call::GetAsyncKeyState}),
            "<0002> <antigen> <722> <GetAsyncKeyState()>");
  EXPECT_EQ(logio::format_antigen_record({3, 9, Call::KeybdEvent}), "<0003> <antigen> <9> <keybd_event()>");
}

TEST(Format, RoundTripCanonicalLines) {
  for (const char* line : {"<0001> <signal> <11> <32> <89>", "<0000> <signal> <0> <0> <100>",
                           "<0042> <signal> <33.333333333333336> <95> <46.666666666666664>",
                           "<0002> <antigen> <722> <GetAsyncKeyState()>",
                           "<9999> <antigen> <1> <WriteFile()>"})
    EXPECT_EQ(logio::format_event(logio::parse_event(line)), line);
}

TEST(Format, RoundTripNonCanonicalInput) {
  // Parse accepts loose spacing and bare names; formatting canonicalises.
  const auto ev = logio::parse_event("  <1>   < signal >  <11.0> <32> <89.50>  ");
  EXPECT_EQ(logio::format_event(ev), "<0001> <signal> <11> <32> <89.5>");
  EXPECT_EQ(logio::format_event(logio::parse_event(logio::format_event(ev))),
            logio::format_event(ev));
}

TEST(Format, RoundTripRandomRecords) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> sig(0.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const SignalRecord r{static_cast<Tick>(gen() % 100000), sig(gen), sig(gen), sig(gen)};
    EXPECT_EQ(logio::parse_sig_record(logio::format_sig_record(r)), r);
    const AntigenRecord a{static_cast<Tick>(gen() % 100000), static_cast<Pid>(1 + gen() % 60000),
                          kAllCalls[gen() % std::size(kAllCalls)]};
    EXPECT_EQ(logio::parse_antigen_record(logio::format_antigen_record(a)), a);
  }
}

TEST(MergeEvents, Empty) { EXPECT_TRUE(logio::merge_events({}, {}).empty()); }

TEST(MergeEvents, TickOrder) {
  const std::vector<SignalRecord> s{{1, 0, 0, 100}};
  const std::vector<AntigenRecord> a{{0, 7, Call::Send}};
  const auto m = logio::merge_events(s, a);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(std::get<AntigenRecord>(m[0]), a[0]);
  EXPECT_EQ(std::get<SignalRecord>(m[1]), s[0]);
}

TEST(MergeEvents, SignalFirstWithinTick) {
  const std::vector<SignalRecord> s{{2, 1, 2, 3}};
  const std::vector<AntigenRecord> a{{2, 7, Call::Send}};
  const auto m = logio::merge_events(s, a);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<SignalRecord>(m[0]));
  EXPECT_TRUE(std::holds_alternative<AntigenRecord>(m[1]));
}

TEST(MergeEvents, UnsortedInput) {
  const std::vector<SignalRecord> s{{2, 0, 0, 0}, {1, 0, 0, 0}};
  EXPECT_EQ(error_of([&] { logio::merge_events(s, {}); }), Errc::UnsortedInput);
  const std::vector<AntigenRecord> a{{5, 1, Call::Send}, {4, 1, Call::Send}};
  EXPECT_EQ(error_of([&] { logio::merge_events({}, a); }), Errc::UnsortedInput);
}

TEST(MergeEvents, PropertiesOnRandomStreams) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SignalRecord> s(gen() % 50);
    std::vector<AntigenRecord> a(gen() % 200);
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = {static_cast<Tick>(gen() % 30), static_cast<double>(i), 0, 0};
    for (std::size_t i = 0; i < a.size(); ++i)
      a[i] = {static_cast<Tick>(gen() % 30), static_cast<Pid>(i + 1), Call::Recv};
    std::ranges::stable_sort(s, {}, &SignalRecord::tick);
    std::ranges::stable_sort(a, {}, &AntigenRecord::tick);

    const auto m = logio::merge_events(s, a);
    ASSERT_EQ(m.size(), s.size() + a.size());
    std::vector<SignalRecord> back_s;
    std::vector<AntigenRecord> back_a;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i > 0) {
        ASSERT_LE(tick_of(m[i - 1]), tick_of(m[i]));
        if (tick_of(m[i - 1]) == tick_of(m[i])) {
          ASSERT_FALSE(std::holds_alternative<AntigenRecord>(m[i - 1]) &&
                       std::holds_alternative<SignalRecord>(m[i]));
        }
      }
      if (const auto* p = std::get_if<SignalRecord>(&m[i])) back_s.push_back(*p);
      else back_a.push_back(std::get<AntigenRecord>(m[i]));
    }
    // Each kind comes back in its original order.
    EXPECT_EQ(back_s, s);
    EXPECT_EQ(back_a, a);
  }
}

TEST(ReadLog, MixedWithProcessTableAndComments) {
  std::istringstream in(
      "# manifest x=1\n"
      "# proc 722 bot\n"
      "\n"
      "<0000> <signal> <0> <0> <100>\n"
      "<0000> <antigen> <722> <recv()>\n"
      "<0001> <signal> <11> <32> <89>\n");
  const auto log = logio::read_log(in);
  EXPECT_EQ(log.signals.size(), 2u);
  EXPECT_EQ(log.antigens.size(), 1u);
  EXPECT_EQ(log.process_names.at(722), "bot");
  ASSERT_EQ(log.comments.size(), 1u);
  EXPECT_EQ(log.comments[0], "manifest x=1");
}

TEST(ReadLog, ErrorsCarryLineNumber) {
  std::istringstream in("<0000> <signal> <0> <0> <100>\n<0001> <signal> <101> <0> <0>\n");
  try {
    logio::read_log(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OutOfRange);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ReadLog, UnsortedKind) {
  std::istringstream in("<0003> <signal> <0> <0> <100>\n<0001> <signal> <0> <0> <0>\n");
  EXPECT_EQ(error_of([&] { logio::read_log(in); }), Errc::UnsortedInput);
}

TEST(ReadLog, WriteThenReadIsIdentity) {
  const std::vector<SignalRecord> s{{0, 0, 0, 100}, {1, 12.5, 95, 0}};
  const std::vector<AntigenRecord> a{{0, 722, Call::Recv}, {1, 722, Call::Send}, {1, 1001, Call::ReadFile}};
  std::ostringstream out;
  logio::write_process_table(out, {{722, "bot"}, {1001, "irc"}});
  logio::write_events(out, logio::merge_events(s, a));
  std::istringstream in(out.str());
  const auto log = logio::read_log(in);
  EXPECT_EQ(log.signals, s);
  EXPECT_EQ(log.antigens, a);
  EXPECT_EQ(log.process_names.size(), 2u);
}

TEST(ReadLog, MissingFile) {
  EXPECT_EQ(error_of([] { logio::read_log_file("/nonexistent/x.log"); }), Errc::Io);
}
