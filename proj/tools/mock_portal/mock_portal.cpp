#include "mock_portal.hpp"

#include <algorithm>
#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "core/sampling.hpp"

namespace odum::mock {

using nlohmann::json;

namespace {

std::string shift_date(const std::string& base_date, int days_back) {
    const odum::CivilDate base = odum::parse_date(base_date);
    const std::chrono::sys_days shifted =
        std::chrono::sys_days{base} - std::chrono::days{days_back};
    return odum::format_date(odum::CivilDate{shifted});
}

int date_offset(int index) { return (index * 37) % 100; }

} // namespace

MockDataset make_mock_dataset(int index, const std::string& base_date) {
    MockDataset ds;
    ds.index = index;
    char id[16];
    std::snprintf(id, sizeof(id), "ds-%03d", index);
    ds.identifier = id;
    ds.title = "Dataset " + std::to_string(index);
    ds.description = index % 7 == 0 ? "" : "Observations series " + std::to_string(index);
    ds.category = "environment";
    ds.publisher = "Agency " + std::to_string(index % 3);
    ds.license = index % 11 == 0 ? "" : "CC-BY-4.0";
    switch (index % 4) {
    case 0: ds.frequency = "monthly"; break;
    case 1: ds.frequency = "weekly"; break;
    case 2: ds.frequency = ""; break;
    default: ds.frequency = "annual"; break;
    }
    ds.modified = shift_date(base_date, date_offset(index));
    if (index % 5 == 0)
        ds.formats = {"PDF"};
    else
        ds.formats = {"CSV", "JSON"};
    if (index % 13 != 0) ds.tags = {"open-data", "statistics"};
    ds.download_path = index % 17 == 0 ? "/download/empty.csv" : "/download/data.csv";
    return ds;
}

std::vector<int> mock_order_relevance(int count) {
    std::vector<int> order(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
    return order;
}

std::vector<int> mock_order_by_date(int count, const std::string& base_date) {
    (void)base_date; // ordering depends only on the generated offsets
    std::vector<int> order = mock_order_relevance(count);
    std::sort(order.begin(), order.end(), [](int a, int b) {
        const int oa = date_offset(a);
        const int ob = date_offset(b);
        if (oa != ob) return oa < ob; // smaller offset = more recent
        return a < b;
    });
    return order;
}

struct MockPortal::Impl {
    httplib::Server server;
    std::thread thread;
    mutable std::mutex log_mutex;
    std::vector<RequestLogEntry> log;
    std::atomic<int> in_flight{0};
};

MockPortal::MockPortal() : MockPortal(Config{}) {}

MockPortal::MockPortal(Config config) : config_(std::move(config)), impl_(new Impl) {}

MockPortal::~MockPortal() { stop(); }

std::string MockPortal::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

std::vector<RequestLogEntry> MockPortal::request_log() const {
    std::lock_guard<std::mutex> lock(impl_->log_mutex);
    return impl_->log;
}

void MockPortal::start() {
    auto& svr = impl_->server;
    const Config cfg = config_;

    svr.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response&) {
        const int concurrent = impl_->in_flight.fetch_add(1) + 1;
        std::lock_guard<std::mutex> lock(impl_->log_mutex);
        impl_->log.push_back({std::chrono::steady_clock::now(), req.path, concurrent});
        return httplib::Server::HandlerResponse::Unhandled;
    });
    svr.set_post_routing_handler([this](const httplib::Request&, httplib::Response&) {
        impl_->in_flight.fetch_sub(1);
    });

    svr.Get("/", [cfg](const httplib::Request&, httplib::Response& res) {
        if (cfg.landing_delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.landing_delay_ms));
        res.set_content("<html><body><h1>Open data portal</h1></body></html>", "text/html");
    });
    svr.Get("/slow", [cfg](const httplib::Request&, httplib::Response& res) {
        if (cfg.slow_delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.slow_delay_ms));
        res.set_content("<html><body>slow page</body></html>", "text/html");
    });
    svr.Get("/api/auth", [](const httplib::Request&, httplib::Response& res) {
        res.status = 401;
        res.set_content("{\"error\":\"authentication required\"}", "application/json");
    });
    svr.Get("/sparql", [](const httplib::Request&, httplib::Response& res) {
        res.status = 200;
        res.set_content("", "application/sparql-results+json");
    });
    svr.Get("/api/ok", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}", "application/json");
    });
    svr.Get("/download/data.csv", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("year,value\n2024,1\n2025,2\n", "text/csv");
    });
    svr.Get("/download/empty.csv", [](const httplib::Request&, httplib::Response& res) {
        res.status = 200;
        res.set_content("", "text/csv");
    });
    svr.Get("/checker", [cfg](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("url")) {
            res.status = 400;
            res.set_content("{\"error\":\"missing url\"}", "application/json");
            return;
        }
        json doc;
        doc["url"] = req.get_param_value("url");
        doc["score"] = cfg.checker_score;
        res.set_content(doc.dump(), "application/json");
    });

    const auto dataset_base = [this]() { return base_url(); };

    const auto ckan_package = [cfg, dataset_base](int index) {
        const MockDataset ds = make_mock_dataset(index, cfg.base_date);
        json package;
        package["id"] = ds.identifier;
        package["name"] = ds.identifier;
        package["title"] = ds.title;
        package["notes"] = ds.description;
        package["groups"] = json::array({{{"title", ds.category}}});
        package["organization"] = {{"title", ds.publisher}};
        package["license_title"] = ds.license;
        package["metadata_modified"] = ds.modified + "T00:00:00";
        package["extras"] = json::array({{{"key", "update_frequency"}, {"value", ds.frequency}}});
        json resources = json::array();
        for (const auto& format : ds.formats)
            resources.push_back({{"format", format}, {"url", dataset_base() + ds.download_path}});
        package["resources"] = std::move(resources);
        json tags = json::array();
        for (const auto& tag : ds.tags) tags.push_back({{"name", tag}});
        package["tags"] = std::move(tags);
        return package;
    };

    svr.Get("/api/3/action/package_search",
            [this, cfg, ckan_package](const httplib::Request& req, httplib::Response& res) {
                const std::string sort = req.get_param_value("sort");
                std::vector<int> order;
                if (sort.empty()) {
                    order = mock_order_relevance(cfg.dataset_count);
                } else if (sort == "score desc") {
                    if (!cfg.ckan_supports_relevance_sort) {
                        res.status = 409;
                        res.set_content(
                            "{\"success\":false,\"error\":{\"message\":\"unknown sort\"}}",
                            "application/json");
                        return;
                    }
                    order = mock_order_relevance(cfg.dataset_count);
                } else if (sort == "metadata_modified desc") {
                    if (!cfg.ckan_supports_date_sort) {
                        res.status = 409;
                        res.set_content(
                            "{\"success\":false,\"error\":{\"message\":\"unknown sort\"}}",
                            "application/json");
                        return;
                    }
                    order = mock_order_by_date(cfg.dataset_count, cfg.base_date);
                } else {
                    res.status = 409;
                    res.set_content(
                        "{\"success\":false,\"error\":{\"message\":\"unknown sort\"}}",
                        "application/json");
                    return;
                }

                std::size_t start = 0, rows = 10;
                try {
                    if (req.has_param("start"))
                        start = static_cast<std::size_t>(std::stoul(req.get_param_value("start")));
                    if (req.has_param("rows"))
                        rows = static_cast<std::size_t>(std::stoul(req.get_param_value("rows")));
                } catch (const std::exception&) {
                    res.status = 400;
                    return;
                }

                json results = json::array();
                for (std::size_t i = start; i < std::min(start + rows, order.size()); ++i)
                    results.push_back(ckan_package(order[i]));
                json doc;
                doc["success"] = true;
                doc["result"] = {{"count", cfg.dataset_count}, {"results", std::move(results)}};
                res.set_content(doc.dump(), "application/json");
            });

    const auto udata_dataset = [cfg, dataset_base](int index) {
        const MockDataset ds = make_mock_dataset(index, cfg.base_date);
        json node;
        node["id"] = ds.identifier;
        node["title"] = ds.title;
        node["description"] = ds.description;
        node["organization"] = {{"name", ds.publisher}};
        node["license"] = ds.license;
        node["last_update"] = ds.modified + "T00:00:00";
        node["frequency"] = ds.frequency.empty() ? "unknown" : ds.frequency;
        json resources = json::array();
        for (const auto& format : ds.formats)
            resources.push_back({{"format", format}, {"url", dataset_base() + ds.download_path}});
        node["resources"] = std::move(resources);
        node["tags"] = ds.tags;
        return node;
    };

    svr.Get("/api/1/datasets/",
            [this, cfg, udata_dataset](const httplib::Request& req, httplib::Response& res) {
                const std::string sort = req.get_param_value("sort");
                std::vector<int> order;
                if (sort.empty()) {
                    order = mock_order_relevance(cfg.dataset_count);
                } else if (sort == "-last_update") {
                    order = mock_order_by_date(cfg.dataset_count, cfg.base_date);
                } else {
                    res.status = 400;
                    res.set_content("{\"message\":\"unknown sort\"}", "application/json");
                    return;
                }
                std::size_t page = 1, page_size = 20;
                try {
                    if (req.has_param("page"))
                        page = static_cast<std::size_t>(std::stoul(req.get_param_value("page")));
                    if (req.has_param("page_size"))
                        page_size = static_cast<std::size_t>(
                            std::stoul(req.get_param_value("page_size")));
                } catch (const std::exception&) {
                    res.status = 400;
                    return;
                }
                if (page == 0) page = 1;
                const std::size_t start = (page - 1) * page_size;
                json data = json::array();
                for (std::size_t i = start; i < std::min(start + page_size, order.size()); ++i)
                    data.push_back(udata_dataset(order[i]));
                json doc;
                doc["total"] = cfg.dataset_count;
                doc["page"] = page;
                doc["page_size"] = page_size;
                doc["data"] = std::move(data);
                res.set_content(doc.dump(), "application/json");
            });

    svr.Get("/catalog.jsonld", [this, cfg](const httplib::Request&, httplib::Response& res) {
        json graph = json::array();
        for (int i = 0; i < cfg.dataset_count; ++i) {
            const MockDataset ds = make_mock_dataset(i, cfg.base_date);
            json node;
            node["@id"] = base_url() + "/dataset/" + ds.identifier;
            node["@type"] = "dcat:Dataset";
            node["dct:identifier"] = ds.identifier;
            node["dct:title"] = ds.title;
            node["dct:description"] = ds.description;
            node["dcat:theme"] = ds.category;
            node["dct:publisher"] = {{"foaf:name", ds.publisher}};
            node["dct:license"] = ds.license;
            node["dct:modified"] = ds.modified;
            if (!ds.frequency.empty()) node["dct:accrualPeriodicity"] = ds.frequency;
            json distributions = json::array();
            for (const auto& format : ds.formats)
                distributions.push_back({{"dct:format", format},
                                         {"dcat:downloadURL", base_url() + ds.download_path}});
            node["dcat:distribution"] = std::move(distributions);
            node["dcat:keyword"] = ds.tags;
            graph.push_back(std::move(node));
        }
        json doc;
        doc["@context"] = {{"dcat", "http://www.w3.org/ns/dcat#"},
                           {"dct", "http://purl.org/dc/terms/"}};
        doc["@graph"] = std::move(graph);
        res.set_content(doc.dump(), "application/ld+json");
    });

    svr.Get("/catalog.rdf", [this, cfg](const httplib::Request&, httplib::Response& res) {
        std::string body = "<?xml version=\"1.0\"?>\n<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\" "
                           "xmlns:dcat=\"http://www.w3.org/ns/dcat#\" xmlns:dct=\"http://purl.org/dc/terms/\">\n";
        for (int i = 0; i < cfg.dataset_count; ++i) {
            const MockDataset ds = make_mock_dataset(i, cfg.base_date);
            body += "  <dcat:Dataset>\n";
            body += "    <dct:identifier>" + ds.identifier + "</dct:identifier>\n";
            body += "    <dct:title>" + ds.title + "</dct:title>\n";
            if (!ds.description.empty())
                body += "    <dct:description>" + ds.description + "</dct:description>\n";
            body += "    <dcat:theme>" + ds.category + "</dcat:theme>\n";
            body += "    <dct:publisher>" + ds.publisher + "</dct:publisher>\n";
            if (!ds.license.empty()) body += "    <dct:license>" + ds.license + "</dct:license>\n";
            body += "    <dct:modified>" + ds.modified + "</dct:modified>\n";
            if (!ds.frequency.empty())
                body += "    <dct:accrualPeriodicity>" + ds.frequency +
                        "</dct:accrualPeriodicity>\n";
            body += "    <dcat:Distribution>\n      <dct:format>" + ds.formats.front() +
                    "</dct:format>\n      <dcat:downloadURL rdf:resource=\"" + base_url() +
                    ds.download_path + "\"/>\n    </dcat:Distribution>\n";
            for (const auto& tag : ds.tags)
                body += "    <dcat:keyword>" + tag + "</dcat:keyword>\n";
            body += "  </dcat:Dataset>\n";
        }
        body += "</rdf:RDF>\n";
        res.set_content(body, "application/rdf+xml");
    });

    port_ = svr.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("mock portal failed to bind a port");
    impl_->thread = std::thread([this]() { impl_->server.listen_after_bind(); });
    svr.wait_until_ready();
}

void MockPortal::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

} // namespace odum::mock
