#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "core/assessment_io.hpp"
#include "core/error.hpp"
#include "core/report.hpp"

using namespace odum;
using nlohmann::json;

namespace {

const std::string kSourceDir = ODUM_SOURCE_DIR;

json minimal_assessment() {
    return json{
        {"portal", "Testland"},
        {"country", "Testland"},
        {"region", "EU"},
        {"url", "https://data.test.example"},
        {"assessed_on", "2025-06-01"},
        {"observations",
         {{"a1", {{"kind", "bool"}, {"value", true}}},
          {"d2", {{"kind", "sample"}, {"satisfied", 10}, {"total", 14}}},
          {"e3", {{"kind", "sample"}, {"satisfied", 12}, {"total", 14}}},
          {"e4", {{"kind", "accuracy"}, {"accurate", 9}, {"frequency_specified", 12}}},
          {"c1", {{"kind", "measured"}, {"value", 2.5}, {"unit", "s"}}},
          {"c4", {{"kind", "measured"}, {"value", 61.0}}}}},
        {"provenance", {{"a1", "manual"}, {"c1", "probe"}}},
    };
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("odum-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("assessment parsing") {
    const PortalAssessment assessment = parse_assessment(minimal_assessment(), "test");
    CHECK(assessment.profile.portal == "Testland");
    CHECK(assessment.profile.region == Region::eu);
    CHECK(assessment.record.observations.size() == 6);
    CHECK(assessment.record.observations.at("a1").kind == Observation::Kind::boolean);
    CHECK(assessment.record.observations.at("d2").satisfied == 10);
    CHECK(assessment.record.provenance.at("c1") == Provenance::probe);
    // provenance defaults to manual for observed entries
    CHECK(assessment.record.provenance.at("d2") == Provenance::manual);
}

TEST_CASE("assessment parsing errors") {
    SUBCASE("bad region") {
        json doc = minimal_assessment();
        doc["region"] = "APAC";
        CHECK_THROWS_AS(parse_assessment(doc, "test"), Error);
    }
    SUBCASE("bad observation kind") {
        json doc = minimal_assessment();
        doc["observations"]["a1"] = {{"kind", "fuzzy"}};
        CHECK_THROWS_WITH_AS(parse_assessment(doc, "test"), doctest::Contains("a1"), Error);
    }
    SUBCASE("invalid sample counts") {
        json doc = minimal_assessment();
        doc["observations"]["d2"] = {{"kind", "sample"}, {"satisfied", 15}, {"total", 14}};
        CHECK_THROWS_AS(parse_assessment(doc, "test"), Error);
    }
    SUBCASE("bad date") {
        json doc = minimal_assessment();
        doc["assessed_on"] = "junk";
        CHECK_THROWS_AS(parse_assessment(doc, "test"), Error);
    }
    SUBCASE("missing portal") {
        json doc = minimal_assessment();
        doc.erase("portal");
        CHECK_THROWS_AS(parse_assessment(doc, "test"), Error);
    }
}

TEST_CASE("assessment serialization round-trips") {
    const PortalAssessment assessment = parse_assessment(minimal_assessment(), "test");
    const json serialized = assessment_to_json(assessment);
    const PortalAssessment reparsed = parse_assessment(serialized, "round-trip");
    CHECK(reparsed.profile == assessment.profile);
    CHECK(reparsed.record == assessment.record);
    CHECK(assessment_to_json(reparsed) == serialized);
}

TEST_CASE("load_assessments validates against the schema") {
    const FrameworkSchema schema = builtin_schema();
    TempDir dir;

    SUBCASE("unknown id is rejected with its name") {
        json doc = minimal_assessment();
        doc["observations"]["z9"] = {{"kind", "bool"}, {"value", true}};
        std::ofstream(dir.path / "bad.json") << doc.dump();
        CHECK_THROWS_WITH_AS(load_assessments(dir.path.string(), schema),
                             doctest::Contains("z9"), Error);
    }
    SUBCASE("duplicate portal is rejected") {
        std::ofstream(dir.path / "one.json") << minimal_assessment().dump();
        std::ofstream(dir.path / "two.json") << minimal_assessment().dump();
        CHECK_THROWS_WITH_AS(load_assessments(dir.path.string(), schema),
                             doctest::Contains("duplicate"), Error);
    }
    SUBCASE("records come back sorted by portal") {
        json a = minimal_assessment();
        a["portal"] = "Zeta";
        json b = minimal_assessment();
        b["portal"] = "Alpha";
        std::ofstream(dir.path / "z.json") << a.dump();
        std::ofstream(dir.path / "a.json") << b.dump();
        const auto loaded = load_assessments(dir.path.string(), schema);
        REQUIRE(loaded.size() == 2);
        CHECK(loaded[0].profile.portal == "Alpha");
        CHECK(loaded[1].profile.portal == "Zeta");
    }
    SUBCASE("missing directory is an io error") {
        CHECK_THROWS_AS(load_assessments((dir.path / "nope").string(), schema), Error);
    }
    SUBCASE("unparseable file names the file") {
        std::ofstream(dir.path / "broken.json") << "{not json";
        CHECK_THROWS_WITH_AS(load_assessments(dir.path.string(), schema),
                             doctest::Contains("broken.json"), Error);
    }
}

TEST_CASE("the shipped registry fixture parses and round-trips losslessly") {
    const FrameworkSchema schema = builtin_schema();
    const auto registry = load_assessments(kSourceDir + "/fixtures/registry", schema);
    CHECK(registry.size() == 33);

    int eu = 0, gcc = 0;
    for (const auto& assessment : registry) {
        CHECK_FALSE(assessment.profile.url.empty());
        CHECK(assessment.record.observations.empty());
        if (assessment.profile.region == Region::eu) ++eu;
        if (assessment.profile.region == Region::gcc) ++gcc;
    }
    CHECK(eu == 27);
    CHECK(gcc == 6);

    // parse -> serialize -> parse is identity on every registry file
    namespace fs = std::filesystem;
    for (const auto& entry : fs::directory_iterator(kSourceDir + "/fixtures/registry")) {
        json original;
        std::ifstream(entry.path()) >> original;
        const PortalAssessment parsed = parse_assessment(original, entry.path().string());
        const json serialized = assessment_to_json(parsed);
        const PortalAssessment reparsed = parse_assessment(serialized, "round-trip");
        CHECK(parsed.profile == reparsed.profile);
        CHECK(parsed.record == reparsed.record);
    }

    // empty observations score all-zero with a flag per sub-dimension
    const PortalScorecard card = score_portal(schema, registry.front().record);
    CHECK(card.total == 0);
    CHECK(card.flags.size() == 72);
}

TEST_CASE("csv and markdown rendering") {
    const FrameworkSchema schema = builtin_schema();

    PortalScorecard card;
    card.portal = "Testland";
    for (const auto& id : schema.sub_dimension_ids()) card.binary[id] = 1;
    card.dimension_scores = {{'a', 9}};
    card.total = 180;
    card.provenance["c1"] = Provenance::probe;

    SUBCASE("matrix csv") {
        const ScoreMatrix matrix = build_score_matrix(schema, {card});
        const std::string csv = matrix_to_csv(matrix);
        CHECK(csv.rfind("portal,a1,a2,a3,a4,b1", 0) == 0);
        CHECK(csv.find("\nTestland,1,1,1,") != std::string::npos);
        CHECK(csv.find("i6\n") != std::string::npos);
    }
    SUBCASE("ranking csv and markdown probe marker") {
        std::vector<RankedPortal> ranking{{1, "Testland", "Testland", 180}};
        CHECK(ranking_to_csv(ranking) == "rank,portal,country,total\n1,Testland,Testland,180\n");
        const std::string md = ranking_to_markdown(ranking, {card});
        CHECK(md.find("| 1 | Testland (probe) | Testland | 180 |") != std::string::npos);
    }
    SUBCASE("fields with commas are quoted") {
        std::vector<RankedPortal> ranking{{1, "A, B", "A, B", 5}};
        CHECK(ranking_to_csv(ranking).find("\"A, B\"") != std::string::npos);
    }
}

TEST_CASE("fixed precision formatting") {
    CHECK(format_fixed(88.65, 1) == "88.7");
    CHECK(format_fixed(67.8, 1) == "67.8");
    CHECK(format_fixed(7.005, 2) == "7.00"); // round-to-even on the stored double
    CHECK(format_fixed(7.0, 2) == "7.00");
    CHECK(format_fixed(100.0, 0) == "100");
}

TEST_CASE("report bundle and markdown sections") {
    const FrameworkSchema schema = builtin_schema();
    const auto assessments =
        load_assessments(kSourceDir + "/fixtures/assessments", schema);
    REQUIRE(assessments.size() == 8);
    ReportBundle bundle = build_report_bundle(schema, assessments);

    CHECK(bundle.scorecards.size() == 8);
    CHECK(bundle.ranking.front().total >= bundle.ranking.back().total);

    SUBCASE("regional block reflects the fixture regions") {
        CHECK(bundle.regional.region_counts.at(Region::eu) == 5);
        CHECK(bundle.regional.region_counts.at(Region::gcc) == 3);
    }
    SUBCASE("sections in order, clusters not computed by default") {
        const std::string md = report_to_markdown(schema, bundle);
        const auto validation = md.find("## Validation");
        const auto ranking = md.find("## Ranking");
        const auto regional = md.find("## Regional");
        const auto dimensions = md.find("## Dimensions");
        const auto clusters = md.find("## Clusters");
        CHECK(validation != std::string::npos);
        CHECK(validation < ranking);
        CHECK(ranking < regional);
        CHECK(regional < dimensions);
        CHECK(dimensions < clusters);
        CHECK(md.find("not computed") != std::string::npos);
    }
    SUBCASE("cluster section renders the membership tables") {
        bundle.clusters = run_cluster_analysis(schema, bundle.matrix, bundle.scorecards, 3,
                                               FeatureMatrix::Mode::binary, 42);
        const std::string md = report_to_markdown(schema, bundle);
        CHECK(md.find("Both in K-means and hierarchical clusters") != std::string::npos);
        CHECK(md.find("### Cluster green") != std::string::npos);
        CHECK(md.find("not computed") == std::string::npos);
    }
    SUBCASE("rendering is deterministic") {
        const std::string a = report_to_markdown(schema, bundle);
        const std::string b = report_to_markdown(schema, bundle);
        CHECK(a == b);
    }
}

TEST_CASE("dendrogram json mirrors the linkage") {
    FeatureMatrix matrix;
    matrix.rows = {"A", "B", "C"};
    matrix.columns = {"x"};
    matrix.cells = {{0.0}, {1.0}, {10.0}};
    const LinkageMatrix linkage = ward_linkage(matrix);
    const std::string text = dendrogram_to_json(linkage, matrix.rows);
    const json doc = json::parse(text);
    CHECK(doc.contains("left"));
    CHECK(doc.contains("right"));
    CHECK(doc.at("height").get<double>() == doctest::Approx(linkage.back().height));
    // leaves carry portal names
    CHECK(text.find("\"A\"") != std::string::npos);
    CHECK(text.find("\"C\"") != std::string::npos);
}

TEST_CASE("scorecard json carries provenance for reporting") {
    PortalScorecard card;
    card.portal = "X";
    card.total = 3;
    card.binary = {{"a1", 1}};
    card.dimension_scores = {{'a', 3}};
    card.provenance = {{"a1", Provenance::probe}};
    const json doc = scorecard_to_json(card);
    CHECK(doc.at("portal") == "X");
    CHECK(doc.at("binary").at("a1") == 1);
    CHECK(doc.at("provenance").at("a1") == "probe");
}

TEST_CASE("sanitize_filename") {
    CHECK(sanitize_filename("Saudi Arabia") == "Saudi_Arabia");
    CHECK(sanitize_filename("data.gov") == "data.gov");
    CHECK(sanitize_filename("a/b") == "a_b");
    CHECK(sanitize_filename("") == "_");
}
