#include "probes.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <condition_variable>
#include <ctime>
#include <thread>

#include <netdb.h>
#include <sys/socket.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "error.hpp"

namespace odum {

using nlohmann::json;

std::string ParsedUrl::origin() const {
    return scheme + "://" + host + ":" + std::to_string(port);
}

std::string ParsedUrl::host_key() const { return host + ":" + std::to_string(port); }

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl parsed;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw_invalid("url '" + url + "' lacks a scheme");
    parsed.scheme = url.substr(0, scheme_end);
    if (parsed.scheme != "http" && parsed.scheme != "https")
        throw_invalid("unsupported scheme '" + parsed.scheme + "'");

    const auto authority_start = scheme_end + 3;
    const auto path_start = url.find('/', authority_start);
    const std::string authority = path_start == std::string::npos
                                      ? url.substr(authority_start)
                                      : url.substr(authority_start, path_start - authority_start);
    if (authority.empty()) throw_invalid("url '" + url + "' lacks a host");

    const auto colon = authority.rfind(':');
    if (colon != std::string::npos) {
        parsed.host = authority.substr(0, colon);
        try {
            parsed.port = std::stoi(authority.substr(colon + 1));
        } catch (const std::exception&) {
            throw_invalid("url '" + url + "' has a malformed port");
        }
    } else {
        parsed.host = authority;
        parsed.port = parsed.scheme == "https" ? 443 : 80;
    }
    parsed.target = path_start == std::string::npos ? "/" : url.substr(path_start);
    return parsed;
}

std::optional<long> HttpResponse::content_length() const {
    const auto it = headers.find("content-length");
    if (it == headers.end()) return std::nullopt;
    try {
        return std::stol(it->second);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Serializes request starts per host: bounded concurrency + minimum spacing.
struct HttpFetcher::HostGate {
    std::mutex mutex;
    std::condition_variable cv;
    int active = 0;
    std::chrono::steady_clock::time_point next_allowed{};

    void acquire(int max_active, std::chrono::milliseconds spacing) {
        std::unique_lock<std::mutex> lock(mutex);
        for (;;) {
            const auto now = std::chrono::steady_clock::now();
            if (active < max_active && now >= next_allowed) {
                ++active;
                next_allowed = now + spacing;
                return;
            }
            if (active >= max_active)
                cv.wait(lock);
            else
                cv.wait_until(lock, next_allowed);
        }
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex);
            --active;
        }
        cv.notify_all();
    }
};

HttpFetcher::HttpFetcher() : HttpFetcher(Options{}) {}

HttpFetcher::HttpFetcher(Options options) : options_(std::move(options)) {}

HttpFetcher::~HttpFetcher() = default;

HttpFetcher::HostGate& HttpFetcher::gate_for(const std::string& host_key) {
    std::lock_guard<std::mutex> lock(gates_mutex_);
    auto& slot = gates_[host_key];
    if (!slot) slot = std::make_unique<HostGate>();
    return *slot;
}

namespace {

bool host_resolves(const std::string& host) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    const int rc = getaddrinfo(host.c_str(), nullptr, &hints, &result);
    if (result) freeaddrinfo(result);
    return rc == 0;
}

[[noreturn]] void throw_transport(const std::string& url, httplib::Error err) {
    std::string reason;
    switch (err) {
    case httplib::Error::ConnectionTimeout:
    case httplib::Error::Read:
    case httplib::Error::Write:
        reason = "timeout";
        break;
    case httplib::Error::SSLConnection:
    case httplib::Error::SSLLoadingCerts:
    case httplib::Error::SSLServerVerification:
        reason = "tls";
        break;
    case httplib::Error::Connection:
        reason = "connection";
        break;
    default:
        reason = "transport";
        break;
    }
    throw_network(reason + ": " + url);
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", utc.tm_year + 1900,
                  utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
    return buf;
}

std::string lowercase(std::string text) {
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

} // namespace

HttpResponse HttpFetcher::get(const std::string& url,
                              const std::vector<std::pair<std::string, std::string>>& headers) {
    const ParsedUrl parsed = parse_url(url);
    if (!host_resolves(parsed.host)) throw_network("dns: " + parsed.host);

    auto& gate = gate_for(parsed.host_key());
    gate.acquire(options_.max_per_host, options_.per_host_spacing);
    struct Release {
        HostGate& gate;
        ~Release() { gate.release(); }
    } release{gate};

    httplib::Client client(parsed.origin());
    client.set_connection_timeout(static_cast<time_t>(options_.timeout_seconds), 0);
    client.set_read_timeout(static_cast<time_t>(options_.timeout_seconds), 0);
    client.set_follow_location(true);
    httplib::Headers request_headers{{"User-Agent", options_.user_agent}};
    for (const auto& [name, value] : headers) request_headers.emplace(name, value);

    const auto result = client.Get(parsed.target, request_headers);
    if (!result) throw_transport(url, result.error());

    HttpResponse response;
    response.status = result->status;
    for (const auto& [name, value] : result->headers) response.headers[lowercase(name)] = value;
    response.body = result->body;
    return response;
}

HttpResponse HttpFetcher::head(const std::string& url) {
    const ParsedUrl parsed = parse_url(url);
    if (!host_resolves(parsed.host)) throw_network("dns: " + parsed.host);

    auto& gate = gate_for(parsed.host_key());
    gate.acquire(options_.max_per_host, options_.per_host_spacing);
    struct Release {
        HostGate& gate;
        ~Release() { gate.release(); }
    } release{gate};

    httplib::Client client(parsed.origin());
    client.set_connection_timeout(static_cast<time_t>(options_.timeout_seconds), 0);
    client.set_read_timeout(static_cast<time_t>(options_.timeout_seconds), 0);
    client.set_follow_location(true);

    const auto result = client.Head(parsed.target, {{"User-Agent", options_.user_agent}});
    if (!result) throw_transport(url, result.error());

    HttpResponse response;
    response.status = result->status;
    for (const auto& [name, value] : result->headers) response.headers[lowercase(name)] = value;
    return response;
}

const char* probe_outcome_name(ProbeResult::Outcome outcome) {
    switch (outcome) {
    case ProbeResult::Outcome::pass: return "pass";
    case ProbeResult::Outcome::fail: return "fail";
    case ProbeResult::Outcome::error: return "error";
    }
    return "?";
}

ProbeResult probe_load_time(HttpFetcher& fetcher, const std::string& url,
                            const SubDimension& spec, int trials) {
    if (trials < 1) trials = 1;
    ProbeResult result;
    result.target = url;
    result.check = spec.id;
    result.unit = "s";
    result.timestamp = iso_timestamp();

    std::vector<double> timings;
    timings.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        const auto start = std::chrono::steady_clock::now();
        HttpResponse response;
        try {
            response = fetcher.get(url);
        } catch (const Error& e) {
            result.outcome = ProbeResult::Outcome::error;
            result.evidence = e.what();
            return result;
        }
        const auto stop = std::chrono::steady_clock::now();
        if (!response.ok()) {
            result.outcome = ProbeResult::Outcome::error;
            result.evidence = "http-status:" + std::to_string(response.status);
            return result;
        }
        timings.push_back(std::chrono::duration<double>(stop - start).count());
    }

    std::sort(timings.begin(), timings.end());
    const std::size_t mid = timings.size() / 2;
    const double median = timings.size() % 2 == 1
                              ? timings[mid]
                              : (timings[mid - 1] + timings[mid]) / 2.0;
    result.measured = median;

    AssessmentRecord scratch;
    const int bit = binarize(spec, Observation::measure(median, "s"), scratch);
    result.outcome = bit == 1 ? ProbeResult::Outcome::pass : ProbeResult::Outcome::fail;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "median of %d trials: %.3f s", trials, median);
    result.evidence = buf;
    return result;
}

ProbeResult probe_endpoint(HttpFetcher& fetcher, const std::string& url, EndpointKind kind) {
    ProbeResult result;
    result.target = url;
    switch (kind) {
    case EndpointKind::api: result.check = "endpoint-api"; break;
    case EndpointKind::sparql: result.check = "endpoint-sparql"; break;
    case EndpointKind::download: result.check = "endpoint-download"; break;
    }
    result.timestamp = iso_timestamp();
    if (url.empty()) {
        result.outcome = ProbeResult::Outcome::error;
        result.evidence = "empty url";
        return result;
    }

    // HEAD first; fall back to a byte-range GET when HEAD is refused or the
    // body has to be inspected.
    std::optional<HttpResponse> head;
    try {
        head = fetcher.head(url);
    } catch (const Error&) {
        head.reset();
    }

    auto classify = [&](int status, std::optional<long> body_bytes) -> bool {
        if (status == 401 || status == 403) {
            result.outcome = ProbeResult::Outcome::fail;
            result.evidence = "auth-required";
            return true;
        }
        if (status < 200 || status >= 300) {
            result.outcome = ProbeResult::Outcome::fail;
            result.evidence = "http-status:" + std::to_string(status);
            return true;
        }
        if (!body_bytes.has_value()) return false; // need a GET to decide
        if (*body_bytes <= 0) {
            result.outcome = ProbeResult::Outcome::fail;
            result.evidence = "no-content";
            return true;
        }
        result.outcome = ProbeResult::Outcome::pass;
        result.evidence = "status:" + std::to_string(status) +
                          " bytes:" + std::to_string(*body_bytes);
        return true;
    };

    if (head && head->status != 405 && head->status != 501) {
        if (classify(head->status, head->content_length())) return result;
    }

    HttpResponse got;
    try {
        got = fetcher.get(url, {{"Range", "bytes=0-1023"}});
    } catch (const Error& e) {
        result.outcome = ProbeResult::Outcome::error;
        result.evidence = e.what();
        return result;
    }
    classify(got.status, static_cast<long>(got.body.size()));
    return result;
}

std::optional<CatalogEndpoint::Flavor> parse_catalog_flavor(const std::string& name) {
    if (name == "ckan") return CatalogEndpoint::Flavor::ckan;
    if (name == "udata") return CatalogEndpoint::Flavor::udata;
    if (name == "dcat_feed" || name == "dcat") return CatalogEndpoint::Flavor::dcat_feed;
    if (name == "generic") return CatalogEndpoint::Flavor::generic;
    return std::nullopt;
}

const char* catalog_flavor_name(CatalogEndpoint::Flavor flavor) {
    switch (flavor) {
    case CatalogEndpoint::Flavor::ckan: return "ckan";
    case CatalogEndpoint::Flavor::udata: return "udata";
    case CatalogEndpoint::Flavor::dcat_feed: return "dcat_feed";
    case CatalogEndpoint::Flavor::generic: return "generic";
    }
    return "?";
}

namespace {

std::string strip_trailing_slash(std::string url) {
    while (!url.empty() && url.back() == '/') url.pop_back();
    return url;
}

std::string url_encode(const std::string& text) {
    std::string encoded;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            encoded.push_back(static_cast<char>(c));
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", c);
            encoded += buf;
        }
    }
    return encoded;
}

json fetch_json(HttpFetcher& fetcher, const std::string& url, const std::string& auth_token) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (!auth_token.empty()) headers.emplace_back("Authorization", auth_token);
    const HttpResponse response = fetcher.get(url, headers);
    if (!response.ok())
        throw_network("http-status:" + std::to_string(response.status) + ": " + url);
    try {
        return json::parse(response.body);
    } catch (const json::exception& e) {
        throw_parse("unparseable payload from '" + url + "': " + e.what());
    }
}

std::optional<CivilDate> parse_metadata_date(const std::string& text) {
    if (text.size() < 10) return std::nullopt;
    try {
        return parse_date(text.substr(0, 10));
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Tolerant string extraction for JSON-LD style values: plain strings,
// {"@id": ...}, {"@value": ...} and one-element arrays all collapse.
std::string json_text(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_object()) {
        if (value.contains("@value")) return json_text(value.at("@value"));
        if (value.contains("@id")) return json_text(value.at("@id"));
        if (value.contains("name")) return json_text(value.at("name"));
        if (value.contains("foaf:name")) return json_text(value.at("foaf:name"));
    }
    if (value.is_array() && !value.empty()) return json_text(value.front());
    return "";
}

std::string field_text(const json& node, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        if (node.contains(key)) {
            const std::string text = json_text(node.at(key));
            if (!text.empty()) return text;
        }
    }
    return "";
}

std::string last_path_segment(const std::string& uri) {
    const auto slash = uri.find_last_of("/#");
    return slash == std::string::npos ? uri : uri.substr(slash + 1);
}

DatasetMetadata dataset_from_ckan(const json& package) {
    DatasetMetadata meta;
    meta.identifier = field_text(package, {"id", "name"});
    meta.title = field_text(package, {"title"});
    meta.description = field_text(package, {"notes", "description"});
    if (package.contains("groups") && package.at("groups").is_array() &&
        !package.at("groups").empty())
        meta.category = field_text(package.at("groups").front(), {"title", "name"});
    if (package.contains("organization") && package.at("organization").is_object())
        meta.publisher = field_text(package.at("organization"), {"title", "name"});
    meta.license = field_text(package, {"license_title", "license_id"});
    meta.modification_date = parse_metadata_date(field_text(package, {"metadata_modified"}));
    std::string frequency = field_text(package, {"frequency", "update_frequency"});
    if (frequency.empty() && package.contains("extras") && package.at("extras").is_array()) {
        for (const auto& extra : package.at("extras")) {
            const std::string key = field_text(extra, {"key"});
            if (key == "update_frequency" || key == "frequency" || key == "accrualPeriodicity") {
                frequency = field_text(extra, {"value"});
                break;
            }
        }
    }
    meta.update_frequency = parse_update_frequency(frequency);
    if (package.contains("resources") && package.at("resources").is_array()) {
        for (const auto& resource : package.at("resources")) {
            const std::string format = field_text(resource, {"format"});
            if (!format.empty()) meta.formats.push_back(format);
            const std::string url = field_text(resource, {"url"});
            if (!url.empty()) meta.download_urls.push_back(url);
        }
    }
    if (package.contains("tags") && package.at("tags").is_array()) {
        for (const auto& tag : package.at("tags")) {
            const std::string name = tag.is_string() ? tag.get<std::string>()
                                                     : field_text(tag, {"name", "display_name"});
            if (!name.empty()) meta.tags.push_back(name);
        }
    }
    return meta;
}

DatasetMetadata dataset_from_udata(const json& node) {
    DatasetMetadata meta;
    meta.identifier = field_text(node, {"id", "slug"});
    meta.title = field_text(node, {"title"});
    meta.description = field_text(node, {"description"});
    meta.category = field_text(node, {"category", "topic"});
    if (node.contains("organization") && node.at("organization").is_object())
        meta.publisher = field_text(node.at("organization"), {"name", "title"});
    meta.license = field_text(node, {"license"});
    meta.modification_date = parse_metadata_date(field_text(node, {"last_update", "last_modified"}));
    meta.update_frequency = parse_update_frequency(field_text(node, {"frequency"}));
    if (node.contains("resources") && node.at("resources").is_array()) {
        for (const auto& resource : node.at("resources")) {
            const std::string format = field_text(resource, {"format"});
            if (!format.empty()) meta.formats.push_back(format);
            const std::string url = field_text(resource, {"url", "latest"});
            if (!url.empty()) meta.download_urls.push_back(url);
        }
    }
    if (node.contains("tags") && node.at("tags").is_array()) {
        for (const auto& tag : node.at("tags"))
            if (tag.is_string() && !tag.get<std::string>().empty())
                meta.tags.push_back(tag.get<std::string>());
    }
    return meta;
}

DatasetMetadata dataset_from_dcat_node(const json& node) {
    DatasetMetadata meta;
    meta.identifier = field_text(node, {"@id", "dct:identifier", "identifier"});
    meta.title = field_text(node, {"dct:title", "title"});
    meta.description = field_text(node, {"dct:description", "description"});
    meta.category = field_text(node, {"dcat:theme", "theme"});
    meta.publisher = field_text(node, {"dct:publisher", "publisher"});
    meta.license = field_text(node, {"dct:license", "license"});
    meta.modification_date = parse_metadata_date(field_text(node, {"dct:modified", "modified"}));
    const std::string periodicity =
        field_text(node, {"dct:accrualPeriodicity", "accrualPeriodicity"});
    meta.update_frequency = parse_update_frequency(lowercase(last_path_segment(periodicity)));
    const char* dist_keys[] = {"dcat:distribution", "distribution"};
    for (const char* key : dist_keys) {
        if (!node.contains(key)) continue;
        const json& dist = node.at(key);
        const auto each = [&](const json& entry) {
            const std::string format = field_text(entry, {"dct:format", "format"});
            if (!format.empty()) meta.formats.push_back(last_path_segment(format));
            const std::string url = field_text(entry, {"dcat:downloadURL", "downloadURL",
                                                       "dcat:accessURL", "accessURL"});
            if (!url.empty()) meta.download_urls.push_back(url);
        };
        if (dist.is_array())
            for (const auto& entry : dist) each(entry);
        else
            each(dist);
        break;
    }
    const char* keyword_keys[] = {"dcat:keyword", "keyword"};
    for (const char* key : keyword_keys) {
        if (!node.contains(key)) continue;
        const json& keywords = node.at(key);
        if (keywords.is_array()) {
            for (const auto& kw : keywords) {
                const std::string text = json_text(kw);
                if (!text.empty()) meta.tags.push_back(text);
            }
        } else {
            const std::string text = json_text(keywords);
            if (!text.empty()) meta.tags.push_back(text);
        }
        break;
    }
    return meta;
}

DatasetMetadata dataset_from_generic(const json& node) {
    DatasetMetadata meta;
    meta.identifier = field_text(node, {"identifier", "id", "name"});
    meta.title = field_text(node, {"title"});
    meta.description = field_text(node, {"description"});
    meta.category = field_text(node, {"category"});
    meta.publisher = field_text(node, {"publisher"});
    meta.license = field_text(node, {"license"});
    meta.modification_date =
        parse_metadata_date(field_text(node, {"modification_date", "modified"}));
    meta.update_frequency =
        parse_update_frequency(field_text(node, {"update_frequency", "frequency"}));
    if (node.contains("formats") && node.at("formats").is_array())
        for (const auto& f : node.at("formats"))
            if (f.is_string()) meta.formats.push_back(f.get<std::string>());
    if (node.contains("tags") && node.at("tags").is_array())
        for (const auto& t : node.at("tags"))
            if (t.is_string()) meta.tags.push_back(t.get<std::string>());
    if (node.contains("download_urls") && node.at("download_urls").is_array())
        for (const auto& u : node.at("download_urls"))
            if (u.is_string()) meta.download_urls.push_back(u.get<std::string>());
    return meta;
}

bool is_dcat_dataset_node(const json& node) {
    if (!node.is_object() || !node.contains("@type")) return false;
    const json& type = node.at("@type");
    const auto matches = [](const std::string& t) {
        return t == "dcat:Dataset" || t == "Dataset" ||
               t == "http://www.w3.org/ns/dcat#Dataset";
    };
    if (type.is_string()) return matches(type.get<std::string>());
    if (type.is_array())
        for (const auto& t : type)
            if (t.is_string() && matches(t.get<std::string>())) return true;
    return false;
}

std::vector<json> dcat_nodes_from_jsonld(const json& doc) {
    std::vector<json> nodes;
    if (doc.is_array()) {
        for (const auto& node : doc)
            if (is_dcat_dataset_node(node) || !node.contains("@type")) nodes.push_back(node);
        return nodes;
    }
    if (doc.contains("@graph")) {
        for (const auto& node : doc.at("@graph"))
            if (is_dcat_dataset_node(node)) nodes.push_back(node);
        return nodes;
    }
    for (const char* key : {"dcat:dataset", "dataset", "datasets"}) {
        if (doc.contains(key) && doc.at(key).is_array()) {
            for (const auto& node : doc.at(key)) nodes.push_back(node);
            return nodes;
        }
    }
    return nodes;
}

// Minimal non-validating scan for flat DCAT RDF/XML: one element depth,
// text content and rdf:resource attributes.
std::vector<std::string> xml_blocks(const std::string& body, const std::string& element) {
    std::vector<std::string> blocks;
    const std::string open = "<" + element;
    const std::string close = "</" + element + ">";
    std::size_t pos = 0;
    while ((pos = body.find(open, pos)) != std::string::npos) {
        const auto start = body.find('>', pos);
        if (start == std::string::npos) break;
        const auto end = body.find(close, start);
        if (end == std::string::npos) break;
        blocks.push_back(body.substr(start + 1, end - start - 1));
        pos = end + close.size();
    }
    return blocks;
}

std::string xml_element_text(const std::string& block, const std::string& element) {
    const std::string open = "<" + element;
    const auto pos = block.find(open);
    if (pos == std::string::npos) return "";
    const auto start = block.find('>', pos);
    if (start == std::string::npos) return "";
    const auto end = block.find("</" + element + ">", start);
    if (end == std::string::npos) return "";
    return block.substr(start + 1, end - start - 1);
}

std::vector<std::string> xml_resource_attrs(const std::string& block, const std::string& element) {
    std::vector<std::string> values;
    const std::string open = "<" + element;
    std::size_t pos = 0;
    while ((pos = block.find(open, pos)) != std::string::npos) {
        const auto tag_end = block.find('>', pos);
        if (tag_end == std::string::npos) break;
        const std::string tag = block.substr(pos, tag_end - pos);
        const auto attr = tag.find("rdf:resource=\"");
        if (attr != std::string::npos) {
            const auto value_start = attr + 14;
            const auto value_end = tag.find('"', value_start);
            if (value_end != std::string::npos)
                values.push_back(tag.substr(value_start, value_end - value_start));
        }
        pos = tag_end + 1;
    }
    return values;
}

std::vector<DatasetMetadata> datasets_from_rdf_xml(const std::string& body) {
    std::vector<DatasetMetadata> datasets;
    for (const auto& block : xml_blocks(body, "dcat:Dataset")) {
        DatasetMetadata meta;
        meta.identifier = xml_element_text(block, "dct:identifier");
        meta.title = xml_element_text(block, "dct:title");
        meta.description = xml_element_text(block, "dct:description");
        meta.category = xml_element_text(block, "dcat:theme");
        meta.publisher = xml_element_text(block, "dct:publisher");
        meta.license = xml_element_text(block, "dct:license");
        if (meta.license.empty()) {
            const auto licenses = xml_resource_attrs(block, "dct:license");
            if (!licenses.empty()) meta.license = licenses.front();
        }
        meta.modification_date = parse_metadata_date(xml_element_text(block, "dct:modified"));
        meta.update_frequency = parse_update_frequency(
            lowercase(last_path_segment(xml_element_text(block, "dct:accrualPeriodicity"))));
        for (const auto& dist : xml_blocks(block, "dcat:Distribution")) {
            const std::string format = xml_element_text(dist, "dct:format");
            if (!format.empty()) meta.formats.push_back(last_path_segment(format));
            const auto urls = xml_resource_attrs(dist, "dcat:downloadURL");
            meta.download_urls.insert(meta.download_urls.end(), urls.begin(), urls.end());
        }
        for (const auto& keyword : xml_blocks(block, "dcat:keyword"))
            if (!keyword.empty()) meta.tags.push_back(keyword);
        datasets.push_back(std::move(meta));
    }
    return datasets;
}

std::string ckan_sort_param(SortKey key) {
    switch (key) {
    case SortKey::relevance: return "score desc";
    case SortKey::modification_date: return "metadata_modified desc";
    case SortKey::default_order: return "";
    }
    return "";
}

std::string ckan_search_url(const CatalogEndpoint& endpoint, std::size_t start, std::size_t rows,
                            SortKey key) {
    std::string url = strip_trailing_slash(endpoint.base_url) +
                      "/api/3/action/package_search?start=" + std::to_string(start) +
                      "&rows=" + std::to_string(rows);
    const std::string sort = ckan_sort_param(key);
    if (!sort.empty()) url += "&sort=" + url_encode(sort);
    return url;
}

bool ckan_response_ok(const json& doc) {
    return doc.is_object() && doc.value("success", false) && doc.contains("result");
}

std::string udata_sort_param(SortKey key) {
    switch (key) {
    case SortKey::relevance: return ""; // not offered by the platform API
    case SortKey::modification_date: return "-last_update";
    case SortKey::default_order: return "";
    }
    return "";
}

std::string udata_page_url(const CatalogEndpoint& endpoint, std::size_t page,
                           std::size_t page_size, SortKey key) {
    std::string url = strip_trailing_slash(endpoint.base_url) +
                      "/api/1/datasets/?page=" + std::to_string(page) +
                      "&page_size=" + std::to_string(page_size);
    const std::string sort = udata_sort_param(key);
    if (!sort.empty()) url += "&sort=" + url_encode(sort);
    return url;
}

// The whole-document flavors have no server-side paging or sorting.
std::vector<DatasetMetadata> fetch_whole_catalog(HttpFetcher& fetcher,
                                                 const CatalogEndpoint& endpoint) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (!endpoint.auth_token.empty()) headers.emplace_back("Authorization", endpoint.auth_token);
    const HttpResponse response = fetcher.get(endpoint.base_url, headers);
    if (!response.ok())
        throw_network("http-status:" + std::to_string(response.status) + ": " +
                      endpoint.base_url);

    if (endpoint.flavor == CatalogEndpoint::Flavor::dcat_feed) {
        const auto first_char = response.body.find_first_not_of(" \t\r\n");
        if (first_char != std::string::npos && response.body[first_char] == '<')
            return datasets_from_rdf_xml(response.body);
        json doc;
        try {
            doc = json::parse(response.body);
        } catch (const json::exception& e) {
            throw_parse(std::string("unparseable DCAT document: ") + e.what());
        }
        std::vector<DatasetMetadata> datasets;
        for (const auto& node : dcat_nodes_from_jsonld(doc))
            datasets.push_back(dataset_from_dcat_node(node));
        return datasets;
    }

    json doc;
    try {
        doc = json::parse(response.body);
    } catch (const json::exception& e) {
        throw_parse(std::string("unparseable catalog document: ") + e.what());
    }
    const json* items = nullptr;
    if (doc.is_array()) items = &doc;
    else if (doc.contains("datasets") && doc.at("datasets").is_array()) items = &doc.at("datasets");
    else throw_parse("generic catalog document has no dataset array");
    std::vector<DatasetMetadata> datasets;
    for (const auto& node : *items) datasets.push_back(dataset_from_generic(node));
    return datasets;
}

} // namespace

CatalogInfo inspect_catalog(HttpFetcher& fetcher, const CatalogEndpoint& endpoint) {
    CatalogInfo info;
    switch (endpoint.flavor) {
    case CatalogEndpoint::Flavor::ckan: {
        const json doc =
            fetch_json(fetcher, ckan_search_url(endpoint, 0, 0, SortKey::default_order),
                       endpoint.auth_token);
        if (!ckan_response_ok(doc)) throw_parse("catalog rejected the search request");
        info.size = doc.at("result").value("count", 0u);
        for (const SortKey key : {SortKey::relevance, SortKey::modification_date}) {
            try {
                const json probe =
                    fetch_json(fetcher, ckan_search_url(endpoint, 0, 1, key), endpoint.auth_token);
                const bool supported = ckan_response_ok(probe);
                if (key == SortKey::relevance) info.capabilities.by_relevance = supported;
                else info.capabilities.by_modification_date = supported;
            } catch (const Error&) {
                // rejected sort parameter -> unsupported
            }
        }
        return info;
    }
    case CatalogEndpoint::Flavor::udata: {
        const json doc = fetch_json(fetcher, udata_page_url(endpoint, 1, 1, SortKey::default_order),
                                    endpoint.auth_token);
        info.size = doc.value("total", 0u);
        try {
            const json probe = fetch_json(
                fetcher, udata_page_url(endpoint, 1, 1, SortKey::modification_date),
                endpoint.auth_token);
            info.capabilities.by_modification_date = probe.contains("data");
        } catch (const Error&) {
        }
        info.capabilities.by_relevance = false;
        return info;
    }
    case CatalogEndpoint::Flavor::dcat_feed:
    case CatalogEndpoint::Flavor::generic: {
        info.size = fetch_whole_catalog(fetcher, endpoint).size();
        info.capabilities = {};
        return info;
    }
    }
    throw_invalid("unknown catalog flavor");
}

HarvestResult harvest_catalog(HttpFetcher& fetcher, const CatalogEndpoint& endpoint,
                              const SampleIndexSet& sample) {
    HarvestResult result;

    // Group requested indices per sort key, preserving the sample's order.
    std::map<SortKey, std::vector<std::size_t>> by_key;
    for (const auto& entry : sample.entries) by_key[entry.key].push_back(entry.index);

    switch (endpoint.flavor) {
    case CatalogEndpoint::Flavor::ckan: {
        result.supported = {true, true};
        for (auto& [key, indices] : by_key) {
            std::sort(indices.begin(), indices.end());
            // Contiguous runs become single paged requests.
            std::size_t run_start = 0;
            while (run_start < indices.size()) {
                std::size_t run_end = run_start;
                while (run_end + 1 < indices.size() &&
                       indices[run_end + 1] == indices[run_end] + 1)
                    ++run_end;
                const std::size_t first = indices[run_start];
                const std::size_t rows = indices[run_end] - first + 1;
                const json doc = fetch_json(fetcher, ckan_search_url(endpoint, first, rows, key),
                                            endpoint.auth_token);
                if (!ckan_response_ok(doc)) {
                    result.warnings.push_back(std::string("sort key '") + sort_key_name(key) +
                                              "' rejected by the catalog");
                    if (key == SortKey::relevance) result.supported.by_relevance = false;
                    if (key == SortKey::modification_date)
                        result.supported.by_modification_date = false;
                    break;
                }
                const json& rows_payload = doc.at("result").value("results", json::array());
                if (rows_payload.size() < rows)
                    throw_invalid("sample index out of range for the catalog");
                for (const auto& package : rows_payload)
                    result.datasets.push_back(dataset_from_ckan(package));
                run_start = run_end + 1;
            }
        }
        return result;
    }
    case CatalogEndpoint::Flavor::udata: {
        result.supported = {false, true};
        for (auto& [key, indices] : by_key) {
            if (udata_sort_param(key).empty() && key != SortKey::default_order) {
                result.warnings.push_back(std::string("sort key '") + sort_key_name(key) +
                                          "' not available on this platform");
                result.supported.by_relevance = false;
                continue;
            }
            std::sort(indices.begin(), indices.end());
            for (const std::size_t index : indices) {
                const json doc = fetch_json(fetcher, udata_page_url(endpoint, index + 1, 1, key),
                                            endpoint.auth_token);
                const json& data = doc.value("data", json::array());
                if (data.empty()) throw_invalid("sample index out of range for the catalog");
                result.datasets.push_back(dataset_from_udata(data.front()));
            }
        }
        return result;
    }
    case CatalogEndpoint::Flavor::dcat_feed:
    case CatalogEndpoint::Flavor::generic: {
        result.supported = {};
        const auto all = fetch_whole_catalog(fetcher, endpoint);
        for (const auto& [key, indices] : by_key) {
            if (key != SortKey::default_order) {
                result.warnings.push_back(std::string("sort key '") + sort_key_name(key) +
                                          "' not available for document catalogs");
                continue;
            }
            for (const std::size_t index : indices) {
                if (index >= all.size())
                    throw_invalid("sample index out of range for the catalog");
                result.datasets.push_back(all[index]);
            }
        }
        return result;
    }
    }
    throw_invalid("unknown catalog flavor");
}

bool is_machine_readable_format(const std::string& format) {
    static const char* kMachineReadable[] = {"csv",  "json",    "xml",    "rdf",
                                             "geojson", "xlsx", "parquet"};
    std::string normalized = lowercase(format);
    if (!normalized.empty() && normalized.front() == '.') normalized.erase(0, 1);
    for (const char* candidate : kMachineReadable)
        if (normalized == candidate) return true;
    return false;
}

ObservationFragment auto_observe(const std::vector<DatasetMetadata>& metadata,
                                 const CivilDate& today,
                                 const std::function<bool(const std::string&)>& download_passes) {
    ObservationFragment fragment;
    if (metadata.empty()) return fragment;

    std::vector<bool> e1, e2, e3, f10, f11;
    std::vector<AccuracyDatum> e4;
    for (const auto& meta : metadata) {
        e1.push_back(std::any_of(meta.formats.begin(), meta.formats.end(),
                                 is_machine_readable_format));
        e2.push_back(!meta.title.empty() && !meta.description.empty() &&
                     !meta.category.empty() && !meta.publisher.empty() &&
                     !meta.license.empty() && meta.modification_date.has_value());
        const bool stated = meta.update_frequency != UpdateFrequency::unspecified;
        e3.push_back(stated);
        if (stated) {
            AccuracyDatum datum;
            datum.frequency_stated = true;
            datum.verdict = meta.modification_date
                                ? accuracy_check(meta.update_frequency, *meta.modification_date,
                                                 today)
                                : AccuracyVerdict::unverifiable;
            e4.push_back(datum);
        }
        f10.push_back(!meta.tags.empty());
        bool downloadable = false;
        for (const auto& url : meta.download_urls) {
            if (download_passes(url)) {
                downloadable = true;
                break;
            }
        }
        f11.push_back(downloadable);
    }

    const auto emit = [&fragment](const std::string& id, Observation obs) {
        fragment.observations[id] = std::move(obs);
        fragment.provenance[id] = Provenance::probe;
    };
    emit("e1", tally_sample(e1));
    emit("e2", tally_sample(e2));
    emit("e3", tally_sample(e3));
    emit("e4", e4.empty() ? Observation::accuracy(0, 0) : tally_sample(e4));
    emit("f10", tally_sample(f10));
    emit("f11", tally_sample(f11));
    fragment.notes.push_back("auto-observed " + std::to_string(metadata.size()) + " datasets");
    return fragment;
}

void merge_observations(AssessmentRecord& record, const ObservationFragment& fragment) {
    for (const auto& [id, obs] : fragment.observations) {
        const auto existing = record.provenance.find(id);
        if (record.observations.count(id) && existing != record.provenance.end() &&
            existing->second != Provenance::probe)
            continue; // manual and override entries win
        record.observations[id] = obs;
        record.provenance[id] = Provenance::probe;
    }
}

HttpAccessibilityChecker::HttpAccessibilityChecker(HttpFetcher& fetcher, std::string checker_url)
    : fetcher_(fetcher), checker_url_(std::move(checker_url)) {}

double HttpAccessibilityChecker::check(const std::string& url) {
    const std::string separator = checker_url_.find('?') == std::string::npos ? "?" : "&";
    const HttpResponse response =
        fetcher_.get(checker_url_ + separator + "url=" + url_encode(url));
    if (!response.ok())
        throw_network("checker-unavailable: http-status:" + std::to_string(response.status));
    try {
        const json doc = json::parse(response.body);
        if (!doc.contains("score")) throw_parse("checker-malformed: no score field");
        return doc.at("score").get<double>();
    } catch (const json::exception& e) {
        throw_parse(std::string("checker-malformed: ") + e.what());
    }
}

ProbeResult accessibility_score(AccessibilityChecker& checker, const std::string& url,
                                const SubDimension& spec) {
    ProbeResult result;
    result.target = url;
    result.check = spec.id;
    result.timestamp = iso_timestamp();
    double score = 0.0;
    try {
        score = checker.check(url);
    } catch (const Error& e) {
        result.outcome = ProbeResult::Outcome::error;
        result.evidence = e.kind() == ErrorKind::network ? "checker-unavailable" : e.what();
        return result;
    }
    result.measured = score;
    result.unit = "score";
    AssessmentRecord scratch;
    const int bit = binarize(spec, Observation::measure(score), scratch);
    result.outcome = bit == 1 ? ProbeResult::Outcome::pass : ProbeResult::Outcome::fail;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "checker score %.1f", score);
    result.evidence = buf;
    return result;
}

std::vector<ProbeResult> run_probes(std::vector<ProbeJob> jobs, int workers) {
    if (workers < 1) workers = 1;
    std::vector<ProbeResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= jobs.size()) return;
            try {
                results[index] = jobs[index]();
            } catch (const std::exception& e) {
                ProbeResult failed;
                failed.outcome = ProbeResult::Outcome::error;
                failed.evidence = e.what();
                failed.timestamp = iso_timestamp();
                results[index] = std::move(failed);
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<int>(workers, static_cast<int>(jobs.size()));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();

    std::sort(results.begin(), results.end(), [](const ProbeResult& a, const ProbeResult& b) {
        if (a.target != b.target) return a.target < b.target;
        return a.check < b.check;
    });
    return results;
}

namespace {

const SubDimension* find_by_criterion(const FrameworkSchema& schema, CriterionType type) {
    for (const auto& dim : schema.dimensions)
        for (const auto& sub : dim.sub_dimensions)
            if (sub.criterion.type == type) return &sub;
    return nullptr;
}

} // namespace

PortalProbeOutcome probe_portal(HttpFetcher& fetcher, const FrameworkSchema& schema,
                                const PortalProfile& profile, const PortalProbeTargets& targets,
                                const PortalProbeConfig& config) {
    PortalProbeOutcome outcome;

    std::vector<ProbeJob> jobs;
    if (const SubDimension* c1 = find_by_criterion(schema, CriterionType::timed_load)) {
        jobs.push_back([&fetcher, url = profile.url, spec = *c1, trials = config.trials]() {
            return probe_load_time(fetcher, url, spec, trials);
        });
    }
    if (!config.checker_url.empty()) {
        if (const SubDimension* c4 = find_by_criterion(schema, CriterionType::external_score)) {
            jobs.push_back([&fetcher, checker_url = config.checker_url, url = profile.url,
                            spec = *c4]() {
                HttpAccessibilityChecker checker(fetcher, checker_url);
                return accessibility_score(checker, url, spec);
            });
        }
    }
    if (!targets.api_url.empty()) {
        jobs.push_back([&fetcher, url = targets.api_url]() {
            ProbeResult result = probe_endpoint(fetcher, url, EndpointKind::api);
            result.check = "f12";
            return result;
        });
    }
    if (!targets.sparql_url.empty()) {
        jobs.push_back([&fetcher, url = targets.sparql_url]() {
            ProbeResult result = probe_endpoint(fetcher, url, EndpointKind::sparql);
            result.check = "f13";
            return result;
        });
    }
    outcome.results = run_probes(std::move(jobs));

    // Completed checks become observations; errors only leave log entries.
    for (const auto& result : outcome.results) {
        if (result.outcome == ProbeResult::Outcome::error) continue;
        outcome.reachable = true;
        const bool passed = result.outcome == ProbeResult::Outcome::pass;
        const SubDimension* spec = schema.find(result.check);
        if (!spec) continue;
        Observation obs;
        switch (spec->criterion.type) {
        case CriterionType::timed_load:
        case CriterionType::external_score:
            if (!result.measured) continue;
            obs = Observation::measure(*result.measured, result.unit);
            break;
        case CriterionType::manual:
            obs = Observation::boolean(passed);
            break;
        default:
            continue;
        }
        outcome.fragment.observations[result.check] = obs;
        outcome.fragment.provenance[result.check] = Provenance::probe;
    }

    if (targets.catalog) {
        try {
            const CatalogInfo info = inspect_catalog(fetcher, *targets.catalog);
            if (info.size > 0) {
                const SampleIndexSet sample = select_sample(info.size, info.capabilities);
                const HarvestResult harvest = harvest_catalog(fetcher, *targets.catalog, sample);
                for (const auto& warning : harvest.warnings)
                    outcome.fragment.notes.push_back(warning);
                if (!harvest.datasets.empty()) {
                    outcome.reachable = true;
                    const auto download_check = [&fetcher](const std::string& url) {
                        return probe_endpoint(fetcher, url, EndpointKind::download).outcome ==
                               ProbeResult::Outcome::pass;
                    };
                    ObservationFragment observed =
                        auto_observe(harvest.datasets, config.today, download_check);
                    for (auto& [id, obs] : observed.observations) {
                        outcome.fragment.observations[id] = std::move(obs);
                        outcome.fragment.provenance[id] = Provenance::probe;
                    }
                    for (auto& note : observed.notes)
                        outcome.fragment.notes.push_back(std::move(note));
                }
            }
        } catch (const Error& e) {
            ProbeResult failed;
            failed.target = targets.catalog->base_url;
            failed.check = "catalog-harvest";
            failed.outcome = ProbeResult::Outcome::error;
            failed.evidence = e.what();
            failed.timestamp = iso_timestamp();
            outcome.results.push_back(std::move(failed));
        }
    }
    return outcome;
}

} // namespace odum
