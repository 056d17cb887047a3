// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every expected value is pinned here, not computed from the code
// under test, so a regression cannot hide.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pir/net.hpp"
#include "pir/pairing_graph.hpp"
#include "pir/schemes.hpp"
#include "pir/verify.hpp"

using namespace pir;

namespace {

struct Checker {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }

  template <typename A, typename B>
  void expect_eq(const A& got, const B& want, const std::string& what) {
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want;
    expect(got == want, os.str());
  }
};

int failures = 0;

void report(int num, const std::string& name, const Checker& c) {
  std::printf("%s  criterion %d: %s\n", c.ok ? "PASS" : "FAIL", num,
              name.c_str());
  for (const auto& note : c.notes) std::printf("      - %s\n", note.c_str());
  if (!c.ok) ++failures;
}

uint64_t measured_upload(const SchemeParams& p) {
  Rng rng(1);
  const Database db = random_database(p.k, p.record_bits, rng);
  const auto result = verify::run_protocol(p, db, RecordId{1}, 2);
  return result.transcript.total_upload();
}

void criterion1() {
  Checker c;
  for (uint64_t R : {2, 3, 4}) {
    c.expect_eq(verify::measured_worst_download(SchemeParams::con1(3, R)),
                R + 1, "con1 k=3 R=" + std::to_string(R));
    c.expect_eq(verify::measured_worst_download(SchemeParams::con2(3, R)),
                R + 1, "con2 k=3 R=" + std::to_string(R));
  }
  const uint64_t con3_expect[] = {120, 90, 75};
  const uint32_t con3_n[] = {2, 3, 5};
  for (int i = 0; i < 3; ++i) {
    c.expect_eq(
        verify::measured_worst_download(SchemeParams::con3(con3_n[i], 4, 60)),
        con3_expect[i],
        "con3 n=" + std::to_string(con3_n[i]) + " k=4 R=60");
  }
  c.expect_eq(verify::measured_worst_download(SchemeParams::con4(2, 12, 4, 3)),
              18, "con4 R=12 s=4 t=3");
  c.expect_eq(verify::measured_worst_download(SchemeParams::con5(3, 2, 9)), 12,
              "con5 n=3 k=2 R=9");
  c.expect_eq(verify::measured_worst_download(SchemeParams::con5(2, 2, 4)), 6,
              "con5 n=2 k=2 R=4");
  c.expect_eq(verify::measured_worst_download(SchemeParams::con6(2, 2, 4)), 6,
              "con6 n=2 k=2 R=4");
  report(1, "worst-case download equalities", c);
}

void criterion2() {
  Checker c;
  const auto check_upload = [&](const SchemeParams& p, uint64_t want,
                                const std::string& what) {
    c.expect_eq(schemes::profile(p).upload_bits, want, what + " (profile)");
    c.expect_eq(measured_upload(p), want, what + " (measured)");
  };
  for (uint64_t R : {2, 3, 4}) {
    check_upload(SchemeParams::con1(3, R), 3 * R * (R + 1),
                 "con1 upload k=3 R=" + std::to_string(R));
    check_upload(SchemeParams::con2(3, R),
                 3 * (R + 1) * symbol_width(R + 1),
                 "con2 upload k=3 R=" + std::to_string(R));
  }
  for (uint32_t n : {2, 3, 5}) {
    check_upload(SchemeParams::con3(n, 4, 60),
                 uint64_t(n) * 4 * symbol_width(n),
                 "con3 upload n=" + std::to_string(n));
  }
  check_upload(SchemeParams::con4(2, 12, 4, 3), 9 * 2 * symbol_width(3),
               "con4 upload R=12 s=4 t=3 merge=1");
  check_upload(SchemeParams::con6(2, 2, 4), 2 * 2 * symbol_width(2),
               "con6 upload n=2 k=2");
  // k^2 n^k ceil(log2 n) at n=2, k=2.
  check_upload(SchemeParams::con5(2, 2, 4), 16, "con5 upload n=2 k=2");
  report(2, "upload equalities with ceil(log2) rounding", c);
}

void criterion3() {
  Checker c;
  const auto run = [&](const SchemeParams& p, const std::string& what,
                       uint64_t expect_runs) {
    const auto rep = verify::check_correctness_exhaustive(p);
    c.expect(rep.pass, what + ": " + rep.detail);
    c.expect_eq(rep.failures, 0, what + " failures");
    if (expect_runs != 0) c.expect_eq(rep.runs, expect_runs, what + " runs");
    c.expect(rep.randomness_exhaustive, what + ": randomness not exhaustive");
  };
  run(SchemeParams::chor2(2, 1), "chor2 k=2 R=1", 128);
  run(SchemeParams::con3(2, 2, 1), "con3 n=2 k=2 R=1", 16 * 2 * 4);
  run(SchemeParams::con3(3, 2, 2), "con3 n=3 k=2 R=2", 16 * 2 * 9);
  // 576 randomness points; the database axis is fully enumerated (256),
  // which covers the sampled-database requirement.
  run(SchemeParams::con5(2, 2, 4), "con5 n=2 k=2 R=4", 256 * 2 * 576);
  run(SchemeParams::con6(2, 2, 4), "con6 n=2 k=2 R=4", 256 * 2 * 4);
  report(3, "exhaustive correctness with zero failures", c);
}

void criterion4() {
  Checker c;
  const std::pair<SchemeParams, std::string> cases[] = {
      {SchemeParams::chor2(2, 2), "chor2 k=2 R=2"},
      {SchemeParams::con1(2, 2), "con1 k=2 R=2"},
      {SchemeParams::con2(2, 3), "con2 k=2 R=3"},
      {SchemeParams::con3(3, 2, 2), "con3 n=3 k=2"},
      {SchemeParams::con4(2, 4, 2, 3), "con4 R=4 s=2 t=3"},
      {SchemeParams::con6(2, 2, 4), "con6 n=2 k=2"},
      {SchemeParams::con5(2, 2, 4), "con5 n=2 k=2"},
  };
  for (const auto& [p, what] : cases) {
    const auto rep = verify::check_exact_privacy(p);
    c.expect(rep.pass, what + ": " + rep.detail);
  }
  const auto broken = verify::check_exact_privacy(
      SchemeParams::con3(3, 3, 2), uint64_t(1) << 20,
      verify::leaky_con3_queries());
  c.expect(!broken.pass, "negative control unexpectedly passed");
  report(4, "exact privacy identical across record indices", c);
}

void criterion5() {
  Checker c;
  const std::pair<SchemeParams, std::string> cases[] = {
      {SchemeParams::chor2(3, 2), "chor2 k=3 R=2"},
      {SchemeParams::con1(3, 2), "con1 k=3 R=2"},
      {SchemeParams::con1(3, 4), "con1 k=3 R=4"},
      {SchemeParams::con2(3, 3), "con2 k=3 R=3"},
      {SchemeParams::con3(2, 4, 60), "con3 n=2 k=4 R=60"},
      {SchemeParams::con3(3, 4, 60), "con3 n=3 k=4 R=60"},
      {SchemeParams::con3(5, 4, 60), "con3 n=5 k=4 R=60"},
      {SchemeParams::con4(2, 12, 4, 3), "con4 R=12 s=4 t=3"},
      {SchemeParams::con5(3, 2, 9), "con5 n=3 k=2 R=9"},
      {SchemeParams::con5(2, 2, 4), "con5 n=2 k=2 R=4"},
      {SchemeParams::con6(2, 2, 4), "con6 n=2 k=2 R=4"},
  };
  for (const auto& [p, what] : cases) {
    const uint64_t measured = verify::measured_worst_download(p);
    const uint64_t bound =
        verify::lower_bound_download(p.n, p.k, p.record_bits);
    std::ostringstream os;
    os << what << ": measured " << measured << " < bound " << bound;
    c.expect(measured >= bound, os.str());
  }
  // The n-server bound is met with equality once k is large enough.
  c.expect_eq(verify::lower_bound_download(2, 10, 8), 16,
              "bound value n=2 k=10 R=8");
  c.expect_eq(verify::measured_worst_download(SchemeParams::con3(2, 10, 8)),
              16, "con3 n=2 k=10 R=8 meets the bound");
  report(5, "measured downloads never beat the lower bounds", c);
}

void criterion6() {
  Checker c;
  // Skip-zero means across the whole randomness space, exact rationals.
  c.expect_eq(verify::mean_download_exhaustive(SchemeParams::con3(2, 2, 1),
                                               true),
              Rational(3, 2), "con3 n=2 k=2 R=1 skip-zero mean");
  c.expect_eq(
      schemes::profile(SchemeParams::con3(2, 2, 1)).worst_download_bits, 2,
      "con3 n=2 k=2 R=1 worst");
  c.expect_eq(verify::mean_download_exhaustive(SchemeParams::con3(2, 2, 2),
                                               true),
              verify::optimal_rate_download(2, 2, 2),
              "con3 n=2 k=2 R=2 skip-zero mean vs closed form");
  c.expect_eq(verify::empirical_alpha_exhaustive(SchemeParams::con1(3, 1)),
              Rational(1, 4), "con1 k=3 R=1 exhaustive alpha");
  c.expect(verify::empirical_alpha_exhaustive(SchemeParams::con1(3, 1)) <=
               verify::alpha_upper_bound(3, 1),
           "alpha exceeds the bound");
  c.expect_eq(verify::alpha_upper_bound(3, 1), Rational(1, 2),
              "alpha bound k=3 R=1");
  report(6, "expected download and silent-run probability", c);
}

void criterion7() {
  Checker c;
  const auto g = build_pairing_graph(3, 3, RecordId{1});
  c.expect_eq(g.components.size(), 15, "component count");
  c.expect_eq(g.isolated_count(), 3, "isolated count");
  c.expect_eq(g.part1.size(), 27, "part1 size");
  c.expect_eq(g.selectors.size(), 13, "selector count");

  const auto has_edge = [&](uint32_t r1, const char* s1, uint32_t r2,
                            const char* s2) {
    const auto parse = [](const char* s) {
      SelectorVec v;
      for (const char* p = s; *p; ++p) v.push_back(uint8_t(*p - '0'));
      return v;
    };
    const PairVertex leaf{r1, parse(s1)};
    const PairVertex center{r2, parse(s2)};
    for (const auto& e : g.edges) {
      if (e.first == leaf && e.second == center) return true;
    }
    return false;
  };
  const struct {
    uint32_t r1;
    const char* s1;
    uint32_t r2;
    const char* s2;
  } edges[] = {
      {1, "101", 2, "002"}, {3, "202", 2, "002"}, {1, "110", 2, "020"},
      {3, "220", 2, "020"}, {1, "112", 2, "022"}, {3, "222", 2, "022"},
      {1, "211", 3, "011"}, {2, "121", 3, "011"}, {2, "211", 1, "011"},
      {3, "121", 1, "011"},
  };
  for (const auto& e : edges) {
    std::ostringstream os;
    os << "edge (" << e.r1 << "," << e.s1 << ")--(" << e.r2 << "," << e.s2
       << ") missing";
    c.expect(has_edge(e.r1, e.s1, e.r2, e.s2), os.str());
  }
  bool isolated_found = false;
  for (const auto& comp : g.components) {
    if (comp.center.has_value()) continue;
    const PairVertex& v = comp.members.front();
    if (v.server == 1 && v.sel == SelectorVec{2, 0, 0}) isolated_found = true;
  }
  c.expect(isolated_found, "isolated vertex (1,200) missing");
  report(7, "pairing graph reproduces the reference figure", c);
}

void criterion8() {
  Checker c;
  const std::pair<SchemeParams, std::string> cases[] = {
      {SchemeParams::chor2(2, 4), "chor2 k=2 R=4"},
      {SchemeParams::con1(2, 3), "con1 k=2 R=3"},
      {SchemeParams::con2(2, 3), "con2 k=2 R=3"},
      {SchemeParams::con3(3, 2, 4), "con3 n=3 k=2 R=4"},
      {SchemeParams::con4(2, 4, 2, 3), "con4 R=4 s=2 t=3"},
      {SchemeParams::con5(2, 2, 4), "con5 n=2 k=2 R=4"},
      {SchemeParams::con6(2, 2, 4), "con6 n=2 k=2 R=4"},
  };
  for (const auto& [p, what] : cases) {
    Rng rng(41);
    const Database db = random_database(p.k, p.record_bits, rng);
    const auto storages = schemes::encode(p, db);
    std::vector<std::unique_ptr<net::Daemon>> daemons;
    std::vector<net::Endpoint> endpoints;
    for (uint32_t sid = 1; sid <= p.n; ++sid) {
      daemons.push_back(
          std::make_unique<net::Daemon>(p, storages[sid - 1]));
      daemons.back()->start("127.0.0.1", 0);
      endpoints.push_back(net::Endpoint{"127.0.0.1", daemons.back()->port()});
    }
    for (uint32_t ell = 1; ell <= p.k; ++ell) {
      const uint64_t seed = 7000 + ell;
      const auto local = verify::run_protocol(p, db, RecordId{ell}, seed);
      try {
        const auto remote =
            net::fetch_record(endpoints, p, RecordId{ell}, seed);
        c.expect(remote.record == local.record,
                 what + ": record differs from the local run");
        c.expect(remote.transcript == local.transcript,
                 what + ": transcript differs from the local run");
      } catch (const std::exception& e) {
        c.expect(false, what + ": " + e.what());
      }
    }
  }
  report(8, "local/remote equivalence over live daemons", c);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures != 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
