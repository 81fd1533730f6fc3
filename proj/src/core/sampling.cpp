#include "sampling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "error.hpp"

namespace odum {

const char* sort_key_name(SortKey key) {
    switch (key) {
    case SortKey::relevance: return "relevance";
    case SortKey::modification_date: return "modification_date";
    case SortKey::default_order: return "default";
    }
    return "?";
}

namespace {

// First `head` and last `tail` positions under one sort key; overlapping
// windows collapse to the whole catalog.
void append_window(std::vector<SampleEntry>& out, SortKey key, std::size_t size, std::size_t head,
                   std::size_t tail) {
    std::set<std::size_t> indices;
    for (std::size_t i = 0; i < std::min(head, size); ++i) indices.insert(i);
    for (std::size_t i = size - std::min(tail, size); i < size; ++i) indices.insert(i);
    for (std::size_t index : indices) out.push_back({key, index});
}

} // namespace

SampleIndexSet select_sample(std::size_t catalog_size, SortCapabilities caps) {
    if (catalog_size == 0) throw_invalid("cannot sample an empty catalog");
    SampleIndexSet sample;
    if (caps.by_relevance && caps.by_modification_date) {
        append_window(sample.entries, SortKey::relevance, catalog_size, 4, 3);
        append_window(sample.entries, SortKey::modification_date, catalog_size, 4, 3);
    } else if (caps.by_modification_date) {
        append_window(sample.entries, SortKey::modification_date, catalog_size, 8, 6);
    } else if (caps.by_relevance) {
        append_window(sample.entries, SortKey::relevance, catalog_size, 8, 6);
    } else {
        append_window(sample.entries, SortKey::default_order, catalog_size, 8, 6);
    }
    return sample;
}

int sample_pass_threshold(int sample_size, const Criterion& criterion) {
    if (criterion.type != CriterionType::sampled)
        throw_invalid("pass threshold is defined for sampled criteria only");
    if (sample_size >= criterion.pass_denominator) return criterion.pass_numerator;
    return static_cast<int>(std::ceil(criterion.ratio * sample_size));
}

const char* update_frequency_name(UpdateFrequency freq) {
    switch (freq) {
    case UpdateFrequency::daily: return "daily";
    case UpdateFrequency::weekly: return "weekly";
    case UpdateFrequency::monthly: return "monthly";
    case UpdateFrequency::quarterly: return "quarterly";
    case UpdateFrequency::annually: return "annually";
    case UpdateFrequency::irregular: return "irregular";
    case UpdateFrequency::unspecified: return "unspecified";
    }
    return "?";
}

UpdateFrequency parse_update_frequency(const std::string& text, bool* unknown) {
    if (unknown) *unknown = false;
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower.empty() || lower == "unspecified" || lower == "unknown" || lower == "none")
        return UpdateFrequency::unspecified;
    if (lower == "daily" || lower == "day") return UpdateFrequency::daily;
    if (lower == "weekly" || lower == "week") return UpdateFrequency::weekly;
    if (lower == "monthly" || lower == "month") return UpdateFrequency::monthly;
    if (lower == "quarterly" || lower == "quarter") return UpdateFrequency::quarterly;
    if (lower == "annually" || lower == "annual" || lower == "yearly" || lower == "year")
        return UpdateFrequency::annually;
    if (lower == "irregular") return UpdateFrequency::irregular;
    if (unknown) *unknown = true;
    return UpdateFrequency::irregular;
}

CivilDate parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw_parse("date '" + iso + "' is not YYYY-MM-DD");
    const CivilDate date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                         std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) throw_parse("date '" + iso + "' is not a valid calendar date");
    return date;
}

std::string format_date(const CivilDate& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

namespace {

long days_between(const CivilDate& from, const CivilDate& to) {
    return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

// Linearized period index so "current or previous" is a difference of <= 1.
long month_index(const CivilDate& d) {
    return static_cast<long>(static_cast<int>(d.year())) * 12 +
           static_cast<long>(static_cast<unsigned>(d.month())) - 1;
}

long quarter_index(const CivilDate& d) {
    return static_cast<long>(static_cast<int>(d.year())) * 4 +
           (static_cast<long>(static_cast<unsigned>(d.month())) - 1) / 3;
}

} // namespace

AccuracyVerdict accuracy_check(UpdateFrequency freq, const CivilDate& last_modified,
                               const CivilDate& today) {
    if (std::chrono::sys_days{last_modified} > std::chrono::sys_days{today})
        throw_invalid("last_modified " + format_date(last_modified) + " is after today " +
                      format_date(today));
    switch (freq) {
    case UpdateFrequency::daily:
        return days_between(last_modified, today) <= 2 ? AccuracyVerdict::accurate
                                                       : AccuracyVerdict::stale;
    case UpdateFrequency::weekly:
        return days_between(last_modified, today) <= 14 ? AccuracyVerdict::accurate
                                                        : AccuracyVerdict::stale;
    case UpdateFrequency::monthly:
        return month_index(today) - month_index(last_modified) <= 1 ? AccuracyVerdict::accurate
                                                                    : AccuracyVerdict::stale;
    case UpdateFrequency::quarterly:
        return quarter_index(today) - quarter_index(last_modified) <= 1
                   ? AccuracyVerdict::accurate
                   : AccuracyVerdict::stale;
    case UpdateFrequency::annually:
        return static_cast<int>(today.year()) - static_cast<int>(last_modified.year()) <= 1
                   ? AccuracyVerdict::accurate
                   : AccuracyVerdict::stale;
    case UpdateFrequency::irregular:
    case UpdateFrequency::unspecified:
        return AccuracyVerdict::unverifiable;
    }
    return AccuracyVerdict::unverifiable;
}

Observation tally_sample(const std::vector<bool>& verdicts) {
    if (verdicts.empty()) throw_invalid("cannot tally an empty sample");
    const int satisfied = static_cast<int>(std::count(verdicts.begin(), verdicts.end(), true));
    return Observation::sample(satisfied, static_cast<int>(verdicts.size()));
}

Observation tally_sample(const std::vector<AccuracyDatum>& verdicts) {
    if (verdicts.empty()) throw_invalid("cannot tally an empty sample");
    int accurate = 0;
    int stated = 0;
    for (const auto& datum : verdicts) {
        if (datum.frequency_stated) ++stated;
        if (datum.verdict == AccuracyVerdict::accurate) ++accurate;
    }
    return Observation::accuracy(accurate, stated);
}

} // namespace odum
