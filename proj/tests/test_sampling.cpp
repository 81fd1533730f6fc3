#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "core/error.hpp"
#include "core/framework.hpp"
#include "core/sampling.hpp"

using namespace odum;

namespace {

std::set<std::size_t> indices_for(const SampleIndexSet& sample, SortKey key) {
    std::set<std::size_t> indices;
    for (const auto& entry : sample.entries)
        if (entry.key == key) indices.insert(entry.index);
    return indices;
}

Criterion sampled_criterion() {
    Criterion c;
    c.type = CriterionType::sampled;
    c.pass_numerator = 10;
    c.pass_denominator = 14;
    c.ratio = 0.7;
    return c;
}

} // namespace

TEST_CASE("both sorts: first four and last three per sort key") {
    const SampleIndexSet sample = select_sample(100, {true, true});
    CHECK(sample.entries.size() == 14);
    CHECK(indices_for(sample, SortKey::relevance) ==
          std::set<std::size_t>{0, 1, 2, 3, 97, 98, 99});
    CHECK(indices_for(sample, SortKey::modification_date) ==
          std::set<std::size_t>{0, 1, 2, 3, 97, 98, 99});
    CHECK(indices_for(sample, SortKey::default_order).empty());
}

TEST_CASE("date sort only: first eight and last six") {
    const SampleIndexSet sample = select_sample(100, {false, true});
    CHECK(sample.entries.size() == 14);
    CHECK(indices_for(sample, SortKey::modification_date) ==
          std::set<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 94, 95, 96, 97, 98, 99});
}

TEST_CASE("no sorts: first eight and last six in default order") {
    const SampleIndexSet sample = select_sample(100, {false, false});
    CHECK(sample.entries.size() == 14);
    CHECK(indices_for(sample, SortKey::default_order).size() == 14);
}

TEST_CASE("relevance-only behaves like the single-sort rule") {
    const SampleIndexSet sample = select_sample(100, {true, false});
    CHECK(sample.entries.size() == 14);
    CHECK(indices_for(sample, SortKey::relevance).size() == 14);
}

TEST_CASE("small catalogs take everything once per key and deduplicate") {
    SUBCASE("size 10, no sorts: whole catalog, threshold becomes 7") {
        const SampleIndexSet sample = select_sample(10, {false, false});
        CHECK(sample.entries.size() == 10);
        CHECK(indices_for(sample, SortKey::default_order) ==
              std::set<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
        CHECK(sample_pass_threshold(10, sampled_criterion()) == 7);
    }
    SUBCASE("size 5, both sorts: whole catalog per key, pairs unique") {
        const SampleIndexSet sample = select_sample(5, {true, true});
        CHECK(sample.entries.size() == 10);
        std::set<SampleEntry> unique(sample.entries.begin(), sample.entries.end());
        CHECK(unique.size() == sample.entries.size());
        CHECK(indices_for(sample, SortKey::relevance) == std::set<std::size_t>{0, 1, 2, 3, 4});
    }
    SUBCASE("size 1") {
        const SampleIndexSet sample = select_sample(1, {false, true});
        CHECK(sample.entries.size() == 1);
    }
    SUBCASE("size 0 is an error") { CHECK_THROWS_AS(select_sample(0, {true, true}), Error); }
}

TEST_CASE("sample selection is deterministic and capped at 14") {
    for (const SortCapabilities caps :
         {SortCapabilities{true, true}, SortCapabilities{false, true},
          SortCapabilities{false, false}}) {
        for (std::size_t size : {1ul, 5ul, 8ul, 13ul, 14ul, 33ul, 1000ul}) {
            const SampleIndexSet a = select_sample(size, caps);
            const SampleIndexSet b = select_sample(size, caps);
            CHECK(a.entries == b.entries);
            CHECK(a.entries.size() <= 14);
            std::set<SampleEntry> unique(a.entries.begin(), a.entries.end());
            CHECK(unique.size() == a.entries.size());
            for (const auto& entry : a.entries) CHECK(entry.index < size);
        }
    }
    // the nominal size is reached whenever the windows fit
    CHECK(select_sample(14, {false, false}).entries.size() == 14);
    CHECK(select_sample(8, {true, true}).entries.size() == 14);
}

TEST_CASE("pass threshold follows the 70% rule below the nominal sample") {
    const Criterion c = sampled_criterion();
    CHECK(sample_pass_threshold(14, c) == 10);
    CHECK(sample_pass_threshold(20, c) == 10);
    CHECK(sample_pass_threshold(10, c) == 7);
    CHECK(sample_pass_threshold(5, c) == 4);
    CHECK(sample_pass_threshold(1, c) == 1);
    Criterion manual;
    CHECK_THROWS_AS(sample_pass_threshold(14, manual), Error);
}

TEST_CASE("update frequency parsing") {
    bool unknown = false;
    CHECK(parse_update_frequency("monthly", &unknown) == UpdateFrequency::monthly);
    CHECK_FALSE(unknown);
    CHECK(parse_update_frequency("Weekly") == UpdateFrequency::weekly);
    CHECK(parse_update_frequency("ANNUAL") == UpdateFrequency::annually);
    CHECK(parse_update_frequency("yearly") == UpdateFrequency::annually);
    CHECK(parse_update_frequency("") == UpdateFrequency::unspecified);
    CHECK(parse_update_frequency("unknown") == UpdateFrequency::unspecified);
    CHECK(parse_update_frequency("irregular") == UpdateFrequency::irregular);

    CHECK(parse_update_frequency("fortnightly", &unknown) == UpdateFrequency::irregular);
    CHECK(unknown); // unknown strings map to irregular with a warning
}

TEST_CASE("date parsing") {
    const CivilDate d = parse_date("2024-02-29");
    CHECK(format_date(d) == "2024-02-29");
    CHECK_THROWS_AS(parse_date("2023-02-29"), Error);
    CHECK_THROWS_AS(parse_date("not-a-date"), Error);
    CHECK_THROWS_AS(parse_date("2024-13-01"), Error);
}

TEST_CASE("accuracy windows: one full period of slack") {
    const CivilDate today = parse_date("2024-02-20");

    SUBCASE("monthly: current or previous calendar month") {
        CHECK(accuracy_check(UpdateFrequency::monthly, parse_date("2024-01-15"), today) ==
              AccuracyVerdict::accurate);
        CHECK(accuracy_check(UpdateFrequency::monthly, parse_date("2024-02-01"), today) ==
              AccuracyVerdict::accurate);
        CHECK(accuracy_check(UpdateFrequency::monthly, parse_date("2023-12-31"), today) ==
              AccuracyVerdict::stale);
        CHECK(accuracy_check(UpdateFrequency::monthly, parse_date("2023-11-30"), today) ==
              AccuracyVerdict::stale);
    }
    SUBCASE("monthly is day-of-month invariant") {
        for (int day = 1; day <= 31; ++day) {
            const CivilDate modified{std::chrono::year{2024}, std::chrono::month{1},
                                     std::chrono::day{static_cast<unsigned>(day)}};
            if (!modified.ok()) continue;
            CHECK(accuracy_check(UpdateFrequency::monthly, modified, today) ==
                  AccuracyVerdict::accurate);
        }
    }
    SUBCASE("daily: two days of slack") {
        CHECK(accuracy_check(UpdateFrequency::daily, parse_date("2024-02-18"), today) ==
              AccuracyVerdict::accurate);
        CHECK(accuracy_check(UpdateFrequency::daily, parse_date("2024-02-17"), today) ==
              AccuracyVerdict::stale);
    }
    SUBCASE("weekly: fourteen days of slack") {
        CHECK(accuracy_check(UpdateFrequency::weekly, parse_date("2024-02-06"), today) ==
              AccuracyVerdict::accurate);
        CHECK(accuracy_check(UpdateFrequency::weekly, parse_date("2024-02-05"), today) ==
              AccuracyVerdict::stale);
    }
    SUBCASE("quarterly: current or previous quarter") {
        CHECK(accuracy_check(UpdateFrequency::quarterly, parse_date("2023-10-01"), today) ==
              AccuracyVerdict::accurate);
        CHECK(accuracy_check(UpdateFrequency::quarterly, parse_date("2023-09-30"), today) ==
              AccuracyVerdict::stale);
    }
    SUBCASE("annually: current or previous year") {
        CHECK(accuracy_check(UpdateFrequency::annually, parse_date("2023-01-01"), today) ==
              AccuracyVerdict::accurate);
        CHECK(accuracy_check(UpdateFrequency::annually, parse_date("2022-12-31"), today) ==
              AccuracyVerdict::stale);
    }
    SUBCASE("irregular and unspecified are unverifiable") {
        CHECK(accuracy_check(UpdateFrequency::irregular, parse_date("2024-02-20"), today) ==
              AccuracyVerdict::unverifiable);
        CHECK(accuracy_check(UpdateFrequency::unspecified, parse_date("2024-02-20"), today) ==
              AccuracyVerdict::unverifiable);
    }
    SUBCASE("a future modification date is an error") {
        CHECK_THROWS_AS(accuracy_check(UpdateFrequency::monthly, parse_date("2024-02-21"), today),
                        Error);
    }
}

TEST_CASE("tallying verdicts into observations") {
    SUBCASE("booleans become a sample count") {
        std::vector<bool> verdicts(10, true);
        verdicts.insert(verdicts.end(), 4, false);
        const Observation obs = tally_sample(verdicts);
        CHECK(obs.kind == Observation::Kind::sample);
        CHECK(obs.satisfied == 10);
        CHECK(obs.total == 14);
    }
    SUBCASE("accuracy verdicts count stated frequencies in the denominator") {
        std::vector<AccuracyDatum> verdicts;
        for (int i = 0; i < 7; ++i) verdicts.push_back({AccuracyVerdict::accurate, true});
        for (int i = 0; i < 2; ++i) verdicts.push_back({AccuracyVerdict::stale, true});
        verdicts.push_back({AccuracyVerdict::unverifiable, true});
        const Observation obs = tally_sample(verdicts);
        CHECK(obs.kind == Observation::Kind::accuracy);
        CHECK(obs.accurate == 7);
        CHECK(obs.frequency_specified == 10);

        // and the resulting observation clears e4 when e3 passes
        const FrameworkSchema schema = builtin_schema();
        AssessmentRecord record;
        record.observations["e3"] = Observation::sample(10, 14);
        CHECK(binarize(*schema.find("e4"), obs, record, nullptr, &schema) == 1);
    }
    SUBCASE("datasets without a stated frequency stay out of the denominator") {
        std::vector<AccuracyDatum> verdicts;
        verdicts.push_back({AccuracyVerdict::accurate, true});
        verdicts.push_back({AccuracyVerdict::unverifiable, false});
        const Observation obs = tally_sample(verdicts);
        CHECK(obs.accurate == 1);
        CHECK(obs.frequency_specified == 1);
    }
    SUBCASE("empty tallies are errors") {
        CHECK_THROWS_AS(tally_sample(std::vector<bool>{}), Error);
        CHECK_THROWS_AS(tally_sample(std::vector<AccuracyDatum>{}), Error);
    }
}
