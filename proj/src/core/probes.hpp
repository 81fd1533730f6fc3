#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "framework.hpp"
#include "sampling.hpp"
#include "scoring.hpp"

namespace odum {

struct ParsedUrl {
    std::string scheme;
    std::string host;
    int port = 0;
    std::string target; // path + query, never empty ("/" minimum)

    std::string origin() const;   // scheme://host:port
    std::string host_key() const; // politeness bucket (host:port)
};

ParsedUrl parse_url(const std::string& url);

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;
    std::string body;

    bool ok() const { return status >= 200 && status < 300; }
    std::optional<long> content_length() const;
};

// HTTP client with politeness guarantees: at most `max_per_host` in-flight
// requests per host and at least `per_host_spacing` between request starts.
class HttpFetcher {
public:
    struct Options {
        double timeout_seconds = 15.0;
        std::string user_agent = "odum-workbench/1.0";
        int max_per_host = 2;
        std::chrono::milliseconds per_host_spacing{500};
    };

    HttpFetcher();
    explicit HttpFetcher(Options options);
    ~HttpFetcher();

    HttpFetcher(const HttpFetcher&) = delete;
    HttpFetcher& operator=(const HttpFetcher&) = delete;

    // Throw Error(network) with reason codes dns/tls/timeout/connection.
    HttpResponse get(const std::string& url,
                     const std::vector<std::pair<std::string, std::string>>& headers = {});
    HttpResponse head(const std::string& url);

    const Options& options() const { return options_; }

private:
    struct HostGate;
    HostGate& gate_for(const std::string& host_key);

    Options options_;
    std::mutex gates_mutex_;
    std::map<std::string, std::unique_ptr<HostGate>> gates_;
};

struct ProbeResult {
    enum class Outcome { pass, fail, error };

    std::string target;
    std::string check; // sub-dimension id or free-form check name
    Outcome outcome = Outcome::error;
    std::optional<double> measured;
    std::string unit;
    std::string evidence;
    std::string timestamp;
};

const char* probe_outcome_name(ProbeResult::Outcome outcome);

// Median wall time to the last byte of the main document over `trials`
// requests; pass/fail decided by the schema's timed-load criterion.
ProbeResult probe_load_time(HttpFetcher& fetcher, const std::string& url,
                            const SubDimension& spec, int trials = 3);

enum class EndpointKind { api, sparql, download };

ProbeResult probe_endpoint(HttpFetcher& fetcher, const std::string& url, EndpointKind kind);

struct DatasetMetadata {
    std::string identifier;
    std::string title;
    std::string description;
    std::string category;
    std::string publisher;
    std::string license;
    std::optional<CivilDate> modification_date;
    UpdateFrequency update_frequency = UpdateFrequency::unspecified;
    std::vector<std::string> formats;
    std::vector<std::string> tags;
    std::vector<std::string> download_urls;
};

struct CatalogEndpoint {
    enum class Flavor { ckan, udata, dcat_feed, generic };

    std::string base_url;
    Flavor flavor = Flavor::generic;
    std::string auth_token;
};

std::optional<CatalogEndpoint::Flavor> parse_catalog_flavor(const std::string& name);
const char* catalog_flavor_name(CatalogEndpoint::Flavor flavor);

struct CatalogInfo {
    std::size_t size = 0;
    SortCapabilities capabilities;
};

// Catalog size plus which of the framework's sort keys the server honors.
CatalogInfo inspect_catalog(HttpFetcher& fetcher, const CatalogEndpoint& endpoint);

struct HarvestResult {
    std::vector<DatasetMetadata> datasets;
    SortCapabilities supported;
    std::vector<std::string> warnings; // e.g. sort keys the server rejected
};

HarvestResult harvest_catalog(HttpFetcher& fetcher, const CatalogEndpoint& endpoint,
                              const SampleIndexSet& sample);

struct ObservationFragment {
    std::map<std::string, Observation> observations;
    std::map<std::string, Provenance> provenance;
    std::vector<std::string> notes;
};

// Formats counted as machine readable for e1.
bool is_machine_readable_format(const std::string& format);

// Derives the sampled e/f observations from harvested metadata. The download
// check decides f11; inject a stub for offline use.
ObservationFragment auto_observe(const std::vector<DatasetMetadata>& metadata,
                                 const CivilDate& today,
                                 const std::function<bool(const std::string&)>& download_passes);

// Probe observations never displace manual or override entries.
void merge_observations(AssessmentRecord& record, const ObservationFragment& fragment);

class AccessibilityChecker {
public:
    virtual ~AccessibilityChecker() = default;
    // 0-100 score; throws Error(network) when the checker cannot answer.
    virtual double check(const std::string& url) = 0;
};

class StubAccessibilityChecker : public AccessibilityChecker {
public:
    explicit StubAccessibilityChecker(double score) : score_(score) {}
    double check(const std::string&) override { return score_; }

private:
    double score_;
};

// Talks to a checker service: GET <checker_url>?url=<target>, JSON {"score": n}.
class HttpAccessibilityChecker : public AccessibilityChecker {
public:
    HttpAccessibilityChecker(HttpFetcher& fetcher, std::string checker_url);
    double check(const std::string& url) override;

private:
    HttpFetcher& fetcher_;
    std::string checker_url_;
};

ProbeResult accessibility_score(AccessibilityChecker& checker, const std::string& url,
                                const SubDimension& spec);

// Runs jobs on a bounded pool; results come back sorted by (target, check)
// so concurrency never changes the output.
using ProbeJob = std::function<ProbeResult()>;
std::vector<ProbeResult> run_probes(std::vector<ProbeJob> jobs, int workers = 4);

struct PortalProbeTargets {
    std::optional<CatalogEndpoint> catalog;
    std::string api_url;    // f12 reachability when set
    std::string sparql_url; // f13 reachability when set
};

struct PortalProbeConfig {
    int trials = 3;
    std::string checker_url; // empty -> skip the accessibility check
    CivilDate today{};
};

struct PortalProbeOutcome {
    std::vector<ProbeResult> results;
    ObservationFragment fragment;
    bool reachable = false; // at least one check completed (pass or fail)
};

// Full automated pass over one portal: load timing, endpoint reachability,
// accessibility, catalog harvest and the derived sampled observations.
PortalProbeOutcome probe_portal(HttpFetcher& fetcher, const FrameworkSchema& schema,
                                const PortalProfile& profile, const PortalProbeTargets& targets,
                                const PortalProbeConfig& config);

} // namespace odum
