#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scoring.hpp"

namespace odum {

struct SortCapabilities {
    bool by_relevance = false;
    bool by_modification_date = false;

    bool operator==(const SortCapabilities&) const = default;
};

enum class SortKey { relevance, modification_date, default_order };

const char* sort_key_name(SortKey key);

struct SampleEntry {
    SortKey key = SortKey::default_order;
    std::size_t index = 0; // 0-based position in the catalog under that sort

    auto operator<=>(const SampleEntry&) const = default;
};

struct SampleIndexSet {
    std::vector<SampleEntry> entries;
    int target_size = 14;
};

// Positional sampling rules: with both sorts, first 4 + last 3 per sort key;
// with a single sort (or none), first 8 + last 6. Overlapping windows on
// small catalogs deduplicate to the whole catalog per applicable key.
SampleIndexSet select_sample(std::size_t catalog_size, SortCapabilities caps);

// Pass threshold a sample of the given size has to reach (the 70% rule).
int sample_pass_threshold(int sample_size, const Criterion& criterion);

enum class UpdateFrequency { daily, weekly, monthly, quarterly, annually, irregular, unspecified };

const char* update_frequency_name(UpdateFrequency freq);

// Unknown non-empty strings map to irregular; `unknown` reports that case.
UpdateFrequency parse_update_frequency(const std::string& text, bool* unknown = nullptr);

using CivilDate = std::chrono::year_month_day;

CivilDate parse_date(const std::string& iso); // YYYY-MM-DD
std::string format_date(const CivilDate& date);

enum class AccuracyVerdict { accurate, stale, unverifiable };

// Whether the latest modification date honors the declared frequency, with
// one full period of slack (monthly: current or previous calendar month).
AccuracyVerdict accuracy_check(UpdateFrequency freq, const CivilDate& last_modified,
                               const CivilDate& today);

// One dataset's contribution to the e4 tally.
struct AccuracyDatum {
    AccuracyVerdict verdict = AccuracyVerdict::unverifiable;
    bool frequency_stated = false;
};

Observation tally_sample(const std::vector<bool>& verdicts);
Observation tally_sample(const std::vector<AccuracyDatum>& verdicts);

} // namespace odum
