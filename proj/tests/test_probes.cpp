#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "core/error.hpp"
#include "core/framework.hpp"
#include "core/probes.hpp"
#include "core/sampling.hpp"
#include "mock_portal/mock_portal.hpp"

using namespace odum;
using odum::mock::MockPortal;

namespace {

// Fast fetcher for unit tests; politeness gets its own test at defaults.
HttpFetcher::Options quick_options() {
    HttpFetcher::Options options;
    options.per_host_spacing = std::chrono::milliseconds(20);
    options.timeout_seconds = 10.0;
    return options;
}

const SubDimension& c1_spec(const FrameworkSchema& schema) { return *schema.find("c1"); }

} // namespace

TEST_CASE("url parsing") {
    const ParsedUrl url = parse_url("http://example.org:8080/a/b?q=1");
    CHECK(url.scheme == "http");
    CHECK(url.host == "example.org");
    CHECK(url.port == 8080);
    CHECK(url.target == "/a/b?q=1");
    CHECK(url.host_key() == "example.org:8080");

    const ParsedUrl bare = parse_url("https://example.org");
    CHECK(bare.port == 443);
    CHECK(bare.target == "/");

    CHECK_THROWS_AS(parse_url("ftp://example.org"), Error);
    CHECK_THROWS_AS(parse_url("no-scheme"), Error);
}

TEST_CASE("load-time probe against the mock portal") {
    const FrameworkSchema schema = builtin_schema();
    MockPortal::Config config;
    config.landing_delay_ms = 150;
    MockPortal portal(config);
    portal.start();
    HttpFetcher fetcher(quick_options());

    SUBCASE("passing page reports the median wall time") {
        const ProbeResult result = probe_load_time(fetcher, portal.base_url() + "/", c1_spec(schema), 3);
        CHECK(result.outcome == ProbeResult::Outcome::pass);
        REQUIRE(result.measured.has_value());
        CHECK(*result.measured >= 0.15);
        CHECK(*result.measured < 1.5);
        CHECK(result.check == "c1");
        CHECK(result.unit == "s");
    }
    SUBCASE("the schema criterion drives the verdict") {
        SubDimension strict = c1_spec(schema);
        strict.criterion.max_seconds = 0.01; // tighter bound than the page delay
        const ProbeResult result = probe_load_time(fetcher, portal.base_url() + "/", strict, 1);
        CHECK(result.outcome == ProbeResult::Outcome::fail);
    }
    SUBCASE("unresolvable host is a dns error") {
        const ProbeResult result =
            probe_load_time(fetcher, "http://no-such-host.invalid/", c1_spec(schema), 1);
        CHECK(result.outcome == ProbeResult::Outcome::error);
        CHECK(result.evidence.find("dns") != std::string::npos);
        CHECK_FALSE(result.measured.has_value());
    }
    SUBCASE("non-2xx page is an error, not a fail") {
        const ProbeResult result =
            probe_load_time(fetcher, portal.base_url() + "/missing", c1_spec(schema), 1);
        CHECK(result.outcome == ProbeResult::Outcome::error);
        CHECK(result.evidence.find("http-status:404") != std::string::npos);
    }
}

TEST_CASE("endpoint probes") {
    MockPortal portal;
    portal.start();
    HttpFetcher fetcher(quick_options());

    SUBCASE("healthy api endpoint passes") {
        const ProbeResult result =
            probe_endpoint(fetcher, portal.base_url() + "/api/ok", EndpointKind::api);
        CHECK(result.outcome == ProbeResult::Outcome::pass);
    }
    SUBCASE("auth walls fail with auth-required") {
        const ProbeResult result =
            probe_endpoint(fetcher, portal.base_url() + "/api/auth", EndpointKind::api);
        CHECK(result.outcome == ProbeResult::Outcome::fail);
        CHECK(result.evidence == "auth-required");
    }
    SUBCASE("empty 2xx sparql body fails with no-content") {
        const ProbeResult result =
            probe_endpoint(fetcher, portal.base_url() + "/sparql", EndpointKind::sparql);
        CHECK(result.outcome == ProbeResult::Outcome::fail);
        CHECK(result.evidence == "no-content");
    }
    SUBCASE("download endpoints need at least one byte") {
        CHECK(probe_endpoint(fetcher, portal.base_url() + "/download/data.csv",
                             EndpointKind::download)
                  .outcome == ProbeResult::Outcome::pass);
        const ProbeResult empty = probe_endpoint(
            fetcher, portal.base_url() + "/download/empty.csv", EndpointKind::download);
        CHECK(empty.outcome == ProbeResult::Outcome::fail);
        CHECK(empty.evidence == "no-content");
    }
    SUBCASE("missing endpoint fails with the status") {
        const ProbeResult result =
            probe_endpoint(fetcher, portal.base_url() + "/gone", EndpointKind::api);
        CHECK(result.outcome == ProbeResult::Outcome::fail);
        CHECK(result.evidence == "http-status:404");
    }
}

TEST_CASE("ckan catalog inspection and harvest") {
    MockPortal portal;
    portal.start();
    HttpFetcher fetcher(quick_options());
    CatalogEndpoint endpoint{portal.base_url(), CatalogEndpoint::Flavor::ckan, ""};

    SUBCASE("inspection finds size and both sorts") {
        const CatalogInfo info = inspect_catalog(fetcher, endpoint);
        CHECK(info.size == 100);
        CHECK(info.capabilities.by_relevance);
        CHECK(info.capabilities.by_modification_date);
    }
    SUBCASE("harvest resolves the 14-entry sample") {
        const SampleIndexSet sample = select_sample(100, {true, true});
        const HarvestResult harvest = harvest_catalog(fetcher, endpoint, sample);
        REQUIRE(harvest.datasets.size() == 14);
        CHECK(harvest.warnings.empty());

        // relevance window then date window, ascending positions
        std::vector<std::string> ids;
        for (const auto& meta : harvest.datasets) ids.push_back(meta.identifier);
        const std::vector<int> date_order = odum::mock::mock_order_by_date(100, "2025-06-15");
        std::vector<std::string> expected;
        for (int i : {0, 1, 2, 3, 97, 98, 99})
            expected.push_back(odum::mock::make_mock_dataset(i, "2025-06-15").identifier);
        for (int position : {0, 1, 2, 3, 97, 98, 99})
            expected.push_back(
                odum::mock::make_mock_dataset(date_order[static_cast<std::size_t>(position)],
                                              "2025-06-15")
                    .identifier);
        CHECK(ids == expected);

        // field mapping carries everything auto_observe needs
        const DatasetMetadata& first = harvest.datasets.front();
        CHECK(first.title == "Dataset 0");
        CHECK(first.publisher == "Agency 0");
        CHECK(first.modification_date.has_value());
        CHECK(first.update_frequency == UpdateFrequency::monthly);
        CHECK_FALSE(first.formats.empty());
    }
    SUBCASE("sort support reflects the server") {
        MockPortal::Config config;
        config.ckan_supports_relevance_sort = false;
        config.ckan_supports_date_sort = false;
        MockPortal limited(config);
        limited.start();
        CatalogEndpoint endpoint2{limited.base_url(), CatalogEndpoint::Flavor::ckan, ""};
        const CatalogInfo info = inspect_catalog(fetcher, endpoint2);
        CHECK_FALSE(info.capabilities.by_relevance);
        CHECK_FALSE(info.capabilities.by_modification_date);
        // the caller re-derives the sample: first 8 + last 6 in default order
        const SampleIndexSet sample = select_sample(info.size, info.capabilities);
        CHECK(sample.entries.size() == 14);
        CHECK(sample.entries.front().key == SortKey::default_order);
        const HarvestResult harvest = harvest_catalog(fetcher, endpoint2, sample);
        CHECK(harvest.datasets.size() == 14);
    }
}

TEST_CASE("udata catalog adapter") {
    MockPortal portal;
    portal.start();
    HttpFetcher fetcher(quick_options());
    CatalogEndpoint endpoint{portal.base_url(), CatalogEndpoint::Flavor::udata, ""};

    const CatalogInfo info = inspect_catalog(fetcher, endpoint);
    CHECK(info.size == 100);
    CHECK_FALSE(info.capabilities.by_relevance);
    CHECK(info.capabilities.by_modification_date);

    const SampleIndexSet sample = select_sample(info.size, info.capabilities);
    const HarvestResult harvest = harvest_catalog(fetcher, endpoint, sample);
    CHECK(harvest.datasets.size() == 14);
    CHECK(harvest.datasets.front().publisher == "Agency 0");
}

TEST_CASE("dcat feed adapters") {
    MockPortal::Config config;
    config.dataset_count = 20;
    MockPortal portal(config);
    portal.start();
    HttpFetcher fetcher(quick_options());

    SUBCASE("json-ld catalog") {
        CatalogEndpoint endpoint{portal.base_url() + "/catalog.jsonld",
                                 CatalogEndpoint::Flavor::dcat_feed, ""};
        const CatalogInfo info = inspect_catalog(fetcher, endpoint);
        CHECK(info.size == 20);
        CHECK_FALSE(info.capabilities.by_relevance);
        const SampleIndexSet sample = select_sample(info.size, info.capabilities);
        const HarvestResult harvest = harvest_catalog(fetcher, endpoint, sample);
        CHECK(harvest.datasets.size() == 14);
        CHECK(harvest.datasets.front().title == "Dataset 0");
        CHECK(harvest.datasets.front().update_frequency == UpdateFrequency::monthly);
        CHECK_FALSE(harvest.datasets.front().download_urls.empty());
    }
    SUBCASE("rdf/xml catalog") {
        CatalogEndpoint endpoint{portal.base_url() + "/catalog.rdf",
                                 CatalogEndpoint::Flavor::dcat_feed, ""};
        const CatalogInfo info = inspect_catalog(fetcher, endpoint);
        CHECK(info.size == 20);
        const SampleIndexSet sample = select_sample(info.size, info.capabilities);
        const HarvestResult harvest = harvest_catalog(fetcher, endpoint, sample);
        REQUIRE(harvest.datasets.size() == 14);
        CHECK(harvest.datasets.front().title == "Dataset 0");
        CHECK(harvest.datasets.front().license == "CC-BY-4.0");
        CHECK_FALSE(harvest.datasets.front().download_urls.empty());
    }
    SUBCASE("out-of-range sample index") {
        CatalogEndpoint endpoint{portal.base_url() + "/catalog.jsonld",
                                 CatalogEndpoint::Flavor::dcat_feed, ""};
        SampleIndexSet sample;
        sample.entries.push_back({SortKey::default_order, 500});
        CHECK_THROWS_AS(harvest_catalog(fetcher, endpoint, sample), Error);
    }
}

TEST_CASE("machine-readable format set") {
    for (const char* format : {"CSV", "csv", "JSON", "xml", "RDF", "GeoJSON", "XLSX", "parquet"})
        CHECK(is_machine_readable_format(format));
    for (const char* format : {"PDF", "DOCX", "HTML", "zip", ""})
        CHECK_FALSE(is_machine_readable_format(format));
}

TEST_CASE("auto_observe tallies the harvested sample") {
    MockPortal portal;
    portal.start();
    HttpFetcher fetcher(quick_options());
    CatalogEndpoint endpoint{portal.base_url(), CatalogEndpoint::Flavor::ckan, ""};
    const std::string base_date = portal.config().base_date;

    const SampleIndexSet sample = select_sample(100, {true, true});
    const HarvestResult harvest = harvest_catalog(fetcher, endpoint, sample);
    REQUIRE(harvest.datasets.size() == 14);

    const auto download_stub = [](const std::string& url) {
        return url.find("empty") == std::string::npos;
    };
    const ObservationFragment fragment =
        auto_observe(harvest.datasets, parse_date(base_date), download_stub);

    // Independent tally from the generator rules over the sampled ids.
    const std::vector<int> date_order = odum::mock::mock_order_by_date(100, base_date);
    std::vector<int> sampled_ids = {0, 1, 2, 3, 97, 98, 99};
    for (int position : {0, 1, 2, 3, 97, 98, 99})
        sampled_ids.push_back(date_order[static_cast<std::size_t>(position)]);

    int e1 = 0, e2 = 0, e3 = 0, f10 = 0, f11 = 0, accurate = 0, stated = 0;
    for (int id : sampled_ids) {
        const auto ds = odum::mock::make_mock_dataset(id, base_date);
        bool machine = false;
        for (const auto& format : ds.formats) machine |= is_machine_readable_format(format);
        e1 += machine;
        e2 += !ds.title.empty() && !ds.description.empty() && !ds.category.empty() &&
              !ds.publisher.empty() && !ds.license.empty() && !ds.modified.empty();
        const bool has_freq = !ds.frequency.empty();
        e3 += has_freq;
        if (has_freq) {
            ++stated;
            const auto verdict = accuracy_check(parse_update_frequency(ds.frequency),
                                                parse_date(ds.modified), parse_date(base_date));
            accurate += verdict == AccuracyVerdict::accurate;
        }
        f10 += !ds.tags.empty();
        f11 += ds.download_path.find("empty") == std::string::npos;
    }

    CHECK(fragment.observations.at("e1") == Observation::sample(e1, 14));
    CHECK(fragment.observations.at("e2") == Observation::sample(e2, 14));
    CHECK(fragment.observations.at("e3") == Observation::sample(e3, 14));
    CHECK(fragment.observations.at("e4") == Observation::accuracy(accurate, stated));
    CHECK(fragment.observations.at("f10") == Observation::sample(f10, 14));
    CHECK(fragment.observations.at("f11") == Observation::sample(f11, 14));

    // frozen values for this canonical catalog
    CHECK(fragment.observations.at("e1") == Observation::sample(12, 14));
    CHECK(fragment.observations.at("e2") == Observation::sample(10, 14));
    CHECK(fragment.observations.at("e3") == Observation::sample(10, 14));
    CHECK(fragment.observations.at("e4") == Observation::accuracy(7, 10));
    CHECK(fragment.observations.at("f10") == Observation::sample(12, 14));
    CHECK(fragment.observations.at("f11") == Observation::sample(12, 14));

    for (const auto& [id, prov] : fragment.provenance) CHECK(prov == Provenance::probe);

    SUBCASE("empty metadata emits nothing") {
        const ObservationFragment empty = auto_observe({}, parse_date(base_date), download_stub);
        CHECK(empty.observations.empty());
    }
}

TEST_CASE("probe observations never displace manual entries") {
    AssessmentRecord record;
    record.observations["e1"] = Observation::sample(3, 14);
    record.provenance["e1"] = Provenance::manual;
    record.observations["e3"] = Observation::sample(5, 14);
    record.provenance["e3"] = Provenance::probe;

    ObservationFragment fragment;
    fragment.observations["e1"] = Observation::sample(14, 14);
    fragment.provenance["e1"] = Provenance::probe;
    fragment.observations["e2"] = Observation::sample(10, 14);
    fragment.provenance["e2"] = Provenance::probe;
    fragment.observations["e3"] = Observation::sample(9, 14);
    fragment.provenance["e3"] = Provenance::probe;

    merge_observations(record, fragment);
    CHECK(record.observations.at("e1").satisfied == 3);  // manual kept
    CHECK(record.provenance.at("e1") == Provenance::manual);
    CHECK(record.observations.at("e2").satisfied == 10); // new entry added
    CHECK(record.observations.at("e3").satisfied == 9);  // probe refreshed
}

TEST_CASE("accessibility checks") {
    const FrameworkSchema schema = builtin_schema();
    const SubDimension& c4 = *schema.find("c4");

    SUBCASE("stub boundary semantics") {
        StubAccessibilityChecker at_threshold(61);
        CHECK(accessibility_score(at_threshold, "https://x", c4).outcome ==
              ProbeResult::Outcome::pass);
        StubAccessibilityChecker below(60);
        CHECK(accessibility_score(below, "https://x", c4).outcome ==
              ProbeResult::Outcome::fail);
    }
    SUBCASE("http checker against the mock service") {
        MockPortal portal;
        portal.start();
        HttpFetcher fetcher(quick_options());
        HttpAccessibilityChecker checker(fetcher, portal.base_url() + "/checker");
        const ProbeResult result = accessibility_score(checker, "https://portal.example", c4);
        CHECK(result.outcome == ProbeResult::Outcome::pass); // mock serves 75
        CHECK(*result.measured == doctest::Approx(75.0));
    }
    SUBCASE("unavailable checker is an error") {
        HttpFetcher fetcher(quick_options());
        HttpAccessibilityChecker checker(fetcher, "http://no-such-host.invalid/checker");
        const ProbeResult result = accessibility_score(checker, "https://portal.example", c4);
        CHECK(result.outcome == ProbeResult::Outcome::error);
        CHECK(result.evidence == "checker-unavailable");
    }
}

TEST_CASE("politeness: bounded concurrency and spacing per host") {
    MockPortal portal;
    portal.start();
    HttpFetcher fetcher; // default options: 2 per host, 500 ms spacing

    std::vector<ProbeJob> jobs;
    for (int i = 0; i < 5; ++i) {
        jobs.push_back([&fetcher, &portal]() {
            return probe_endpoint(fetcher, portal.base_url() + "/api/ok", EndpointKind::api);
        });
    }
    const auto results = run_probes(std::move(jobs), 4);
    CHECK(results.size() == 5);
    for (const auto& result : results) CHECK(result.outcome == ProbeResult::Outcome::pass);

    auto log = portal.request_log();
    REQUIRE(log.size() >= 5);
    std::sort(log.begin(), log.end(),
              [](const auto& a, const auto& b) { return a.when < b.when; });
    for (const auto& entry : log) CHECK(entry.in_flight <= 2);
    for (std::size_t i = 1; i < log.size(); ++i) {
        const auto gap =
            std::chrono::duration_cast<std::chrono::milliseconds>(log[i].when - log[i - 1].when);
        CHECK(gap.count() >= 450); // 500 ms nominal, small scheduling slack
    }
}

TEST_CASE("run_probes orders results deterministically") {
    std::vector<ProbeJob> jobs;
    for (const char* name : {"zeta", "alpha", "mid"}) {
        jobs.push_back([name]() {
            ProbeResult result;
            result.target = name;
            result.check = "x";
            result.outcome = ProbeResult::Outcome::pass;
            return result;
        });
    }
    const auto results = run_probes(std::move(jobs), 3);
    REQUIRE(results.size() == 3);
    CHECK(results[0].target == "alpha");
    CHECK(results[1].target == "mid");
    CHECK(results[2].target == "zeta");
}

TEST_CASE("probe_portal ties everything together") {
    const FrameworkSchema schema = builtin_schema();
    MockPortal portal;
    portal.start();
    HttpFetcher fetcher(quick_options());

    PortalProfile profile{"Mockland", "Mockland", Region::other, portal.base_url() + "/"};
    PortalProbeTargets targets;
    targets.catalog = CatalogEndpoint{portal.base_url(), CatalogEndpoint::Flavor::ckan, ""};
    targets.api_url = portal.base_url() + "/api/ok";
    targets.sparql_url = portal.base_url() + "/sparql";

    PortalProbeConfig config;
    config.trials = 1;
    config.checker_url = portal.base_url() + "/checker";
    config.today = parse_date(portal.config().base_date);

    const PortalProbeOutcome outcome = probe_portal(fetcher, schema, profile, targets, config);
    CHECK(outcome.reachable);

    CHECK(outcome.fragment.observations.count("c1"));
    CHECK(outcome.fragment.observations.count("c4"));
    CHECK(outcome.fragment.observations.at("f12").value == true);
    CHECK(outcome.fragment.observations.at("f13").value == false); // no-content sparql
    CHECK(outcome.fragment.observations.at("e1") == Observation::sample(12, 14));
    CHECK(outcome.fragment.observations.at("f11") == Observation::sample(12, 14));

    for (const auto& [id, prov] : outcome.fragment.provenance) CHECK(prov == Provenance::probe);

    // the merged record scores without errors
    AssessmentRecord record;
    record.portal = "Mockland";
    merge_observations(record, outcome.fragment);
    const PortalScorecard card = score_portal(schema, record);
    CHECK(card.binary.at("e1") == 1);
    CHECK(card.binary.at("e4") == 1);
    CHECK(card.binary.at("f12") == 1);
    CHECK(card.binary.at("f13") == 0);
}
