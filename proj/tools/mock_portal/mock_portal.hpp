#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace odum::mock {

// Deterministic dataset generator behind the mock portal's catalogs. The
// rules are simple modular patterns so expected tallies can be recomputed
// independently in tests.
struct MockDataset {
    int index = 0;
    std::string identifier;
    std::string title;
    std::string description; // empty every 7th dataset
    std::string category;
    std::string publisher;
    std::string license;     // empty every 11th dataset
    std::string frequency;   // cycles monthly/weekly/(none)/annually
    std::string modified;    // base_date minus (index*37 mod 100) days
    std::vector<std::string> formats; // ["PDF"] every 5th, else ["CSV","JSON"]
    std::vector<std::string> tags;    // empty every 13th dataset
    std::string download_path;        // /download/empty.csv every 17th, else /download/data.csv
};

MockDataset make_mock_dataset(int index, const std::string& base_date);

// Catalog order under each sort the mock honors. Relevance is identifier
// order; modification date ordering follows the generated dates.
std::vector<int> mock_order_relevance(int count);
std::vector<int> mock_order_by_date(int count, const std::string& base_date);

struct RequestLogEntry {
    std::chrono::steady_clock::time_point when;
    std::string path;
    int in_flight = 0; // concurrent handlers inside the server at entry
};

// Local HTTP server emulating an OGD portal: a landing page with a
// configurable delay, CKAN and uData style catalog APIs over the generated
// datasets, a DCAT feed, download endpoints, an auth-walled API, an empty
// SPARQL endpoint and a stub accessibility checker.
class MockPortal {
public:
    struct Config {
        int dataset_count = 100;
        std::string base_date = "2025-06-15";
        int landing_delay_ms = 0;
        int slow_delay_ms = 5000;
        double checker_score = 75.0;
        bool ckan_supports_relevance_sort = true;
        bool ckan_supports_date_sort = true;
    };

    MockPortal();
    explicit MockPortal(Config config);
    ~MockPortal();

    MockPortal(const MockPortal&) = delete;
    MockPortal& operator=(const MockPortal&) = delete;

    // Binds an ephemeral port and serves on a background thread.
    void start();
    void stop();

    int port() const { return port_; }
    std::string base_url() const;
    const Config& config() const { return config_; }

    std::vector<RequestLogEntry> request_log() const;

private:
    struct Impl;
    Config config_;
    int port_ = 0;
    std::unique_ptr<Impl> impl_;
};

} // namespace odum::mock
