#include "odum/odum.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/assessment_io.hpp"
#include "core/cluster.hpp"
#include "core/error.hpp"
#include "core/framework.hpp"
#include "core/probes.hpp"
#include "core/report.hpp"
#include "core/sampling.hpp"
#include "core/scoring.hpp"

namespace {

thread_local std::string t_last_error;

odum_status status_from_kind(odum::ErrorKind kind) {
    switch (kind) {
    case odum::ErrorKind::io: return ODUM_ERROR_IO;
    case odum::ErrorKind::parse: return ODUM_ERROR_PARSE;
    case odum::ErrorKind::invalid: return ODUM_ERROR_INVALID;
    case odum::ErrorKind::network: return ODUM_ERROR_NETWORK;
    case odum::ErrorKind::internal: return ODUM_ERROR_INTERNAL;
    }
    return ODUM_ERROR_INTERNAL;
}

template <typename Fn>
odum_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return ODUM_OK;
    } catch (const odum::Error& e) {
        t_last_error = e.what();
        return status_from_kind(e.kind());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return ODUM_ERROR_INTERNAL;
    }
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

struct odum_schema {
    odum::FrameworkSchema schema;
};

struct odum_corpus {
    std::vector<odum::PortalAssessment> assessments;
};

struct odum_results {
    const odum::FrameworkSchema* schema = nullptr; // owned by the odum_schema handle
    odum::ReportBundle bundle;
};

struct odum_clustering {
    const odum::FrameworkSchema* schema = nullptr;
    odum::ClusterAnalysis analysis;
    odum::ScoreMatrix matrix;
};

extern "C" {

const char* odum_status_name(odum_status status) {
    switch (status) {
    case ODUM_OK: return "ok";
    case ODUM_ERROR_IO: return "io-error";
    case ODUM_ERROR_PARSE: return "parse-error";
    case ODUM_ERROR_INVALID: return "invalid-input";
    case ODUM_ERROR_NETWORK: return "network-error";
    case ODUM_ERROR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* odum_last_error(void) { return t_last_error.c_str(); }

void odum_string_free(char* text) { delete[] text; }

odum_status odum_schema_load_builtin(odum_schema** out) {
    return guarded([&] {
        if (!out) odum::throw_invalid("out is null");
        *out = new odum_schema{odum::builtin_schema()};
    });
}

odum_status odum_schema_load_file(const char* path, odum_schema** out) {
    return guarded([&] {
        if (!out || !path) odum::throw_invalid("path/out is null");
        *out = new odum_schema{odum::load_schema_file(path)};
    });
}

void odum_schema_free(odum_schema* schema) { delete schema; }

int odum_schema_dimension_count(const odum_schema* schema) {
    return schema ? static_cast<int>(schema->schema.dimensions.size()) : 0;
}

int odum_schema_sub_dimension_count(const odum_schema* schema) {
    return schema ? static_cast<int>(schema->schema.sub_dimension_count()) : 0;
}

int odum_schema_total_max(const odum_schema* schema) {
    return schema ? schema->schema.total_max() : 0;
}

odum_status odum_schema_validate(const odum_schema* schema, int* error_count, int* warning_count,
                                 char** text_report) {
    return guarded([&] {
        if (!schema) odum::throw_invalid("schema is null");
        const odum::ValidationReport report = odum::validate_schema(schema->schema);
        if (error_count) *error_count = report.error_count();
        if (warning_count) *warning_count = report.warning_count();
        if (text_report) *text_report = copy_string(report.to_text());
    });
}

odum_status odum_schema_to_json(const odum_schema* schema, char** json_text) {
    return guarded([&] {
        if (!schema || !json_text) odum::throw_invalid("schema/json_text is null");
        *json_text = copy_string(odum::schema_to_json(schema->schema).dump(2) + "\n");
    });
}

odum_status odum_corpus_load_dir(const odum_schema* schema, const char* dir, odum_corpus** out) {
    return guarded([&] {
        if (!schema || !dir || !out) odum::throw_invalid("schema/dir/out is null");
        *out = new odum_corpus{odum::load_assessments(dir, schema->schema)};
    });
}

int odum_corpus_size(const odum_corpus* corpus) {
    return corpus ? static_cast<int>(corpus->assessments.size()) : 0;
}

void odum_corpus_free(odum_corpus* corpus) { delete corpus; }

odum_status odum_results_compute(const odum_schema* schema, const odum_corpus* corpus,
                                 odum_results** out) {
    return guarded([&] {
        if (!schema || !corpus || !out) odum::throw_invalid("schema/corpus/out is null");
        auto results = std::make_unique<odum_results>();
        results->schema = &schema->schema;
        results->bundle = odum::build_report_bundle(schema->schema, corpus->assessments);
        *out = results.release();
    });
}

void odum_results_free(odum_results* results) { delete results; }

int odum_results_total(const odum_results* results, const char* portal) {
    if (!results || !portal) return -1;
    for (const auto& card : results->bundle.scorecards)
        if (card.portal == portal) return card.total;
    return -1;
}

odum_status odum_results_write(const odum_results* results, const char* out_dir) {
    return guarded([&] {
        if (!results || !out_dir) odum::throw_invalid("results/out_dir is null");
        odum::write_scorecards(out_dir, results->bundle.scorecards);
        odum::write_matrix(out_dir, results->bundle.matrix);
    });
}

odum_status odum_results_write_ranking(const odum_results* results, const char* out_dir,
                                       const char* format) {
    return guarded([&] {
        if (!results || !out_dir) odum::throw_invalid("results/out_dir is null");
        const std::string fmt = format ? format : "";
        if (!fmt.empty() && fmt != "csv" && fmt != "md")
            odum::throw_invalid("format must be csv or md");
        odum::write_ranking(out_dir, results->bundle, fmt);
    });
}

odum_status odum_clustering_run(const odum_results* results, int k, const char* features,
                                unsigned long long seed, odum_clustering** out) {
    return guarded([&] {
        if (!results || !out) odum::throw_invalid("results/out is null");
        const std::string mode_name = features ? features : "binary";
        odum::FeatureMatrix::Mode mode;
        if (mode_name == "binary") mode = odum::FeatureMatrix::Mode::binary;
        else if (mode_name == "weighted") mode = odum::FeatureMatrix::Mode::weighted;
        else odum::throw_invalid("features must be binary or weighted");

        auto clustering = std::make_unique<odum_clustering>();
        clustering->schema = results->schema;
        clustering->matrix = results->bundle.matrix;
        clustering->analysis = odum::run_cluster_analysis(
            *results->schema, results->bundle.matrix, results->bundle.scorecards, k, mode, seed);
        *out = clustering.release();
    });
}

int odum_clustering_k(const odum_clustering* clustering) {
    return clustering ? clustering->analysis.k : 0;
}

void odum_clustering_free(odum_clustering* clustering) { delete clustering; }

odum_status odum_clustering_write(const odum_clustering* clustering, const char* out_dir) {
    return guarded([&] {
        if (!clustering || !out_dir) odum::throw_invalid("clustering/out_dir is null");
        odum::write_cluster_outputs(out_dir, clustering->analysis, clustering->matrix,
                                    *clustering->schema);
    });
}

odum_status odum_probe_corpus(const odum_schema* schema, const odum_corpus* corpus,
                              const char* out_dir, int trials, const char* checker_url,
                              int* reachable_count) {
    return guarded([&] {
        if (!schema || !corpus || !out_dir) odum::throw_invalid("schema/corpus/out_dir is null");
        namespace fs = std::filesystem;

        odum::HttpFetcher fetcher;
        odum::PortalProbeConfig config;
        config.trials = trials > 0 ? trials : 3;
        config.checker_url = checker_url ? checker_url : "";
        const auto now = std::chrono::system_clock::now();
        config.today = odum::CivilDate{
            std::chrono::floor<std::chrono::days>(now)};

        int reachable = 0;
        for (const auto& assessment : corpus->assessments) {
            const odum::PortalProbeOutcome outcome = odum::probe_portal(
                fetcher, schema->schema, assessment.profile, assessment.probe_targets, config);
            if (outcome.reachable) ++reachable;

            nlohmann::json log = nlohmann::json::array();
            for (const auto& result : outcome.results) {
                nlohmann::json entry;
                entry["target"] = result.target;
                entry["check"] = result.check;
                entry["outcome"] = odum::probe_outcome_name(result.outcome);
                if (result.measured) {
                    entry["measured"] = *result.measured;
                    entry["unit"] = result.unit;
                }
                entry["evidence"] = result.evidence;
                entry["timestamp"] = result.timestamp;
                log.push_back(std::move(entry));
            }
            const std::string name = odum::sanitize_filename(assessment.profile.portal);
            odum::write_text_file((fs::path(out_dir) / "probes" / (name + ".json")).string(),
                                  log.dump(2) + "\n");

            odum::PortalAssessment merged = assessment;
            odum::merge_observations(merged.record, outcome.fragment);
            odum::write_text_file((fs::path(out_dir) / "fragments" / (name + ".json")).string(),
                                  odum::assessment_to_json(merged).dump(2) + "\n");
        }
        if (reachable_count) *reachable_count = reachable;
        if (!corpus->assessments.empty() && reachable == 0)
            odum::throw_network("no portal in the corpus was reachable");
    });
}

odum_status odum_report_write(const odum_schema* schema, const odum_results* results,
                              const odum_clustering* clustering, const char* out_dir) {
    return guarded([&] {
        if (!schema || !results || !out_dir) odum::throw_invalid("schema/results/out_dir is null");
        odum::ReportBundle bundle = results->bundle;
        if (clustering) bundle.clusters = clustering->analysis;
        odum::write_report(out_dir, schema->schema, bundle);
    });
}

} // extern "C"
