#include <doctest.h>

#include <v2xtrust/rsu.hpp>

using namespace v2xtrust;

TEST_CASE("ingest counts warnings per subject") {
    RsuTallyStore store;
    store.ingest({1, 7, Severity::Malicious, 3});
    REQUIRE(store.find(7) != nullptr);
    CHECK(store.find(7)->m_prime == 1);
    CHECK(store.find(7)->u == 0);

    store.ingest({2, 7, Severity::Uncertain, 3});
    CHECK(store.find(7)->u == 1);

    // unknown subject creates a fresh tally
    store.ingest({1, 9, Severity::Uncertain, 3});
    REQUIRE(store.find(9) != nullptr);
    CHECK(store.find(9)->u == 1);
}

TEST_CASE("duplicate warning tuples count once") {
    RsuTallyStore store;
    const WarningMessage msg{1, 7, Severity::Malicious, 3};
    store.ingest(msg);
    store.ingest(msg);
    CHECK(store.find(7)->m_prime == 1);

    // a different interval is a new observation
    store.ingest({1, 7, Severity::Malicious, 4});
    CHECK(store.find(7)->m_prime == 2);
}

TEST_CASE("alarm fractions divide by the window length") {
    CHECK(alarm_fractions({7, 3, 1, 10}).malicious == doctest::Approx(0.3));
    CHECK(alarm_fractions({7, 3, 1, 10}).uncertain == doctest::Approx(0.1));
    CHECK(alarm_fractions({7, 0, 0, 10}).malicious == doctest::Approx(0.0));
    CHECK(alarm_fractions({7, 0, 0, 10}).uncertain == doctest::Approx(0.0));
    // multiple issuers per interval push the fractions past one
    CHECK(alarm_fractions({7, 10, 10, 10}).malicious == doctest::Approx(1.0));
    CHECK(alarm_fractions({7, 10, 10, 10}).uncertain == doctest::Approx(1.0));
}

TEST_CASE("rsu decision follows the alarm-rate difference") {
    CHECK(rsu_decision(0.3, 0.1) == RsuVerdict::Malicious);    // rates 0.75 / 0.25
    CHECK(rsu_decision(0.1, 0.1) == RsuVerdict::NotMalicious); // tie, strict inequality
    CHECK(rsu_decision(0.0, 0.0) == RsuVerdict::NotMalicious); // no evidence
}

TEST_CASE("rate split sums to one whenever there is evidence") {
    for (int m = 0; m <= 20; ++m) {
        for (int u = 0; u <= 20; ++u) {
            if (m + u == 0) continue;
            const double total = m / 10.0 + u / 10.0;
            const double rate_m = (m / 10.0) / total;
            const double rate_u = (u / 10.0) / total;
            CHECK(rate_m + rate_u == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("rsu decision is equivalent to comparing raw counts") {
    for (std::uint32_t window = 1; window <= 12; ++window) {
        for (std::uint32_t m = 0; m <= 15; ++m) {
            for (std::uint32_t u = 0; u <= 15; ++u) {
                const AlarmFractions f = alarm_fractions({0, m, u, window});
                const RsuVerdict got = rsu_decision(f.malicious, f.uncertain);
                const RsuVerdict want = m > u ? RsuVerdict::Malicious : RsuVerdict::NotMalicious;
                CHECK(got == want);
            }
        }
    }
}

TEST_CASE("evaluation stamps the window and resets the store") {
    RsuTallyStore store;
    store.ingest({1, 7, Severity::Malicious, 1});
    store.ingest({2, 8, Severity::Uncertain, 2});
    for (int i = 0; i < 10; ++i) store.advance_interval();
    CHECK(store.elapsed() == 10);

    const std::vector<RsuTally> tallies = store.evaluate_and_reset();
    REQUIRE(tallies.size() == 2);
    CHECK(tallies[0].subject == 7);
    CHECK(tallies[0].window == 10);
    CHECK(tallies[1].subject == 8);
    CHECK(tallies[1].u == 1);

    CHECK(store.empty());
    CHECK(store.elapsed() == 0);
    CHECK(store.find(7) == nullptr);

    // same tuple counts again in the next window
    store.ingest({1, 7, Severity::Malicious, 1});
    CHECK(store.find(7)->m_prime == 1);
}
