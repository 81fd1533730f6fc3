// Command-line workbench over the odum C API.
//
// Exit codes: 0 success (validate: warnings allowed), 1 I/O or parse
// failure, 2 invalid inputs (validate: structural errors), 3 network
// subcommand with no reachable targets.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include <odum/odum.h>

namespace {

int exit_code_for(odum_status status) {
    switch (status) {
    case ODUM_OK: return 0;
    case ODUM_ERROR_IO: return 1;
    case ODUM_ERROR_PARSE: return 1;
    case ODUM_ERROR_INVALID: return 2;
    case ODUM_ERROR_NETWORK: return 3;
    case ODUM_ERROR_INTERNAL: return 1;
    }
    return 1;
}

int fail(odum_status status) {
    std::fprintf(stderr, "odum: %s: %s\n", odum_status_name(status), odum_last_error());
    return exit_code_for(status);
}

struct SchemaHandle {
    odum_schema* ptr = nullptr;
    ~SchemaHandle() { odum_schema_free(ptr); }
};
struct CorpusHandle {
    odum_corpus* ptr = nullptr;
    ~CorpusHandle() { odum_corpus_free(ptr); }
};
struct ResultsHandle {
    odum_results* ptr = nullptr;
    ~ResultsHandle() { odum_results_free(ptr); }
};
struct ClusteringHandle {
    odum_clustering* ptr = nullptr;
    ~ClusteringHandle() { odum_clustering_free(ptr); }
};

odum_status load_schema(const std::string& schema_path, SchemaHandle& schema) {
    if (schema_path.empty()) return odum_schema_load_builtin(&schema.ptr);
    return odum_schema_load_file(schema_path.c_str(), &schema.ptr);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OGD portal usability workbench"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    std::string schema_path;
    std::string assessments_dir = "fixtures/assessments";
    std::string out_dir = "out";
    std::string k_option = "auto";
    std::string features = "binary";
    std::string format;
    unsigned long long seed = 42;
    int trials = 3;

    app.add_option("--schema", schema_path, "schema document (default: builtin rubric)");
    app.add_option("--assessments", assessments_dir, "directory of assessment records");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--k", k_option, "cluster count: auto or a positive integer");
    app.add_option("--features", features, "cluster feature space: binary|weighted")
        ->check(CLI::IsMember({"binary", "weighted"}));
    app.add_option("--seed", seed, "random seed for clustering");
    app.add_option("--trials", trials, "load-time trials per portal")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "ranking output format: csv|md (default both)")
        ->check(CLI::IsMember({"csv", "md"}));

    auto* cmd_validate = app.add_subcommand("validate", "check the schema and print the report");
    auto* cmd_score = app.add_subcommand("score", "score assessments into scorecards + matrix");
    auto* cmd_rank = app.add_subcommand("rank", "rank scored portals");
    auto* cmd_cluster = app.add_subcommand("cluster", "run the two-method cluster analysis");
    auto* cmd_probe = app.add_subcommand("probe", "run automated portal checks");
    auto* cmd_report = app.add_subcommand("report", "assemble the full markdown report");

    CLI11_PARSE(app, argc, argv);

    int k = 0; // 0 = elbow suggestion
    if (k_option != "auto") {
        char* end = nullptr;
        const long parsed = std::strtol(k_option.c_str(), &end, 10);
        if (end == nullptr || *end != '\0' || parsed < 1) {
            std::fprintf(stderr, "odum: --k must be 'auto' or a positive integer\n");
            return 2;
        }
        k = static_cast<int>(parsed);
    }

    SchemaHandle schema;
    if (const odum_status status = load_schema(schema_path, schema); status != ODUM_OK)
        return fail(status);

    if (cmd_validate->parsed()) {
        int errors = 0, warnings = 0;
        char* text = nullptr;
        const odum_status status = odum_schema_validate(schema.ptr, &errors, &warnings, &text);
        if (status != ODUM_OK) return fail(status);
        std::fputs(text, stdout);
        odum_string_free(text);
        return errors > 0 ? 2 : 0;
    }

    CorpusHandle corpus;
    if (const odum_status status =
            odum_corpus_load_dir(schema.ptr, assessments_dir.c_str(), &corpus.ptr);
        status != ODUM_OK)
        return fail(status);

    if (cmd_probe->parsed()) {
        const char* checker = std::getenv("ODUM_CHECKER_URL");
        int reachable = 0;
        const odum_status status = odum_probe_corpus(schema.ptr, corpus.ptr, out_dir.c_str(),
                                                     trials, checker, &reachable);
        if (status != ODUM_OK) return fail(status);
        std::printf("probed %d portal(s); %d reachable; logs under %s/probes\n",
                    odum_corpus_size(corpus.ptr), reachable, out_dir.c_str());
        return 0;
    }

    ResultsHandle results;
    if (const odum_status status = odum_results_compute(schema.ptr, corpus.ptr, &results.ptr);
        status != ODUM_OK)
        return fail(status);

    if (cmd_score->parsed()) {
        const odum_status status = odum_results_write(results.ptr, out_dir.c_str());
        if (status != ODUM_OK) return fail(status);
        std::printf("scored %d portal(s); scorecards and matrix.csv under %s\n",
                    odum_corpus_size(corpus.ptr), out_dir.c_str());
        return 0;
    }

    if (cmd_rank->parsed()) {
        const odum_status status =
            odum_results_write_ranking(results.ptr, out_dir.c_str(), format.c_str());
        if (status != ODUM_OK) return fail(status);
        std::printf("ranking written under %s\n", out_dir.c_str());
        return 0;
    }

    if (cmd_cluster->parsed()) {
        ClusteringHandle clustering;
        odum_status status =
            odum_clustering_run(results.ptr, k, features.c_str(), seed, &clustering.ptr);
        if (status != ODUM_OK) return fail(status);
        status = odum_clustering_write(clustering.ptr, out_dir.c_str());
        if (status != ODUM_OK) return fail(status);
        std::printf("clustered into k=%d; outputs under %s/clusters\n",
                    odum_clustering_k(clustering.ptr), out_dir.c_str());
        return 0;
    }

    if (cmd_report->parsed()) {
        ClusteringHandle clustering;
        const bool with_clusters = app.count("--k") > 0;
        if (with_clusters) {
            const odum_status status =
                odum_clustering_run(results.ptr, k, features.c_str(), seed, &clustering.ptr);
            if (status != ODUM_OK) return fail(status);
        }
        const odum_status status =
            odum_report_write(schema.ptr, results.ptr, clustering.ptr, out_dir.c_str());
        if (status != ODUM_OK) return fail(status);
        std::printf("report.md written under %s\n", out_dir.c_str());
        return 0;
    }

    return 2;
}
