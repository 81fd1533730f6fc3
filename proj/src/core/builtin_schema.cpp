#include "framework.hpp"

namespace odum {
namespace {

// Criterion codes: m = manual, s = sampled 10/14, a = accuracy tied to e3,
// x = external checker score >= 61, t = load time < 4 s.
struct RubricRow {
    const char* id;
    const char* title;
    const char* description;
    int weight;
    char criterion;
};

constexpr RubricRow kRubric[] = {
    // (a) Multilingualism
    {"a1", "English is one of the supported languages",
     "one of the supported languages is English", 1, 'm'},
    {"a2", "portal interface is available in the supported languages",
     "interface content is at least partially translated for the supported languages", 2, 'm'},
    {"a3", "portal content is available in the supported languages",
     "blogposts, dataset pages, manuals and tutorials are translated to the portal-supported languages", 3, 'm'},
    {"a4", "dataset search can be done in English",
     "users can search for datasets in English", 3, 'm'},
    // (b) Navigation
    {"b1", "convenient menubar structure",
     "users can easily navigate the website", 3, 'm'},
    {"b2", "breadcrumb usage",
     "a navigational trail displays the hierarchical path of the current page", 2, 'm'},
    {"b3", "tabs for content-rich pages",
     "content-rich pages are structured with tabbed navigation elements", 2, 'm'},
    // (c) General performance
    {"c1", "portal loads in less than 4 seconds",
     "the portal main page finishes loading within the time bound", 3, 't'},
    {"c2", "responsive web design",
     "the portal functions effectively on smartphones and tablets", 1, 'm'},
    {"c3", "no blocking errors or exceptions",
     "no unexpected errors or exceptions within basic usage of the portal", 2, 'm'},
    {"c4", "sufficient accessibility level",
     "accessibility assessed by a web-based checker service; passing requires the checker score threshold", 2, 'x'},
    // (d) Data understandability
    {"d1", "HVD promotion",
     "high-value datasets are highlighted and their use encouraged", 3, 'm'},
    {"d2", "dataset views",
     "the number of times a dataset has been viewed is displayed", 2, 's'},
    {"d3", "dataset downloads",
     "the number of times a dataset has been downloaded is displayed", 2, 's'},
    {"d4", "dataset re-use/showcase count",
     "the number of instances where a dataset has been re-used is displayed", 1, 's'},
    {"d5", "re-use/showcase display in dataset page",
     "re-uses of the dataset are showcased on the dataset's page", 2, 's'},
    {"d6", "re-use page dataset list",
     "re-uses are supplied with the list of used datasets", 3, 'm'},
    {"d7", "data preview",
     "a sample or snapshot of dataset content is available before download", 3, 's'},
    {"d8", "data visualization, analytics, and filtering tools",
     "features let users visually represent data, analyze it and filter the displayed information", 3, 's'},
    {"d9", "interactive data visualization",
     "dynamic, user-engaging graphical representations of data are provided", 2, 'm'},
    {"d10", "data visualization download",
     "results of data visualization or previews can be saved", 2, 's'},
    {"d11", "vulgarized content (described through examples and visual aid)",
     "simplified, easily understandable descriptions of complex content are provided", 3, 's'},
    // (e) Data quality
    {"e1", "machine-readable data formats",
     "each dataset is available in machine-readable formats", 3, 's'},
    {"e2", "basic metadata elements",
     "dataset metadata includes at least: title, description, category, publisher, license, modification date", 3, 's'},
    {"e3", "update frequency of datasets",
     "the update frequency is specified for datasets", 3, 's'},
    {"e4", "dataset update frequency accuracy (actual vs promised)",
     "the declared update frequency matches the observed modification dates", 3, 'a'},
    {"e5", "data temporal coverage",
     "datasets are marked with the range of time they cover, when appropriate", 2, 'm'},
    {"e6", "data spatial coverage",
     "datasets are marked with the geographic area they cover, when appropriate", 2, 'm'},
    {"e7", "dataset quality rating",
     "a data quality rating is provided for each dataset", 3, 's'},
    {"e8", "rating explanation",
     "the criteria behind the quality rating can be found", 3, 'm'},
    {"e9", "automated dataset quality checklist",
     "an automated dataset quality checklist assesses dataset quality", 3, 'm'},
    // (f) Data findability
    {"f1", "discoverability by publisher",
     "datasets can be filtered by publisher", 3, 'm'},
    {"f2", "discoverability by categories",
     "datasets can be filtered by categories", 3, 'm'},
    {"f3", "discoverability by formats",
     "datasets can be filtered by formats", 3, 'm'},
    {"f4", "dataset format list",
     "formats available for a dataset are visible from the catalog", 2, 'm'},
    {"f5", "discoverability by tags",
     "datasets can be filtered by tags", 2, 'm'},
    {"f6", "discoverability by license",
     "datasets can be filtered by license", 1, 'm'},
    {"f7", "sorting by modification date",
     "datasets can be sorted by modification date", 3, 'm'},
    {"f8", "sorting by relevance",
     "datasets can be sorted by relevance", 3, 'm'},
    {"f9", "sorting by dataset metadata",
     "datasets can be sorted by metadata criteria", 2, 'm'},
    {"f10", "dataset tags",
     "datasets carry descriptive labels or keywords", 2, 's'},
    {"f11", "data download",
     "data is directly accessible for download on the portal", 3, 's'},
    {"f12", "API endpoints",
     "API endpoints are available", 3, 'm'},
    {"f13", "SPARQL endpoints / RDF files",
     "a SPARQL endpoint or linked data is available", 2, 'm'},
    {"f14", "recommender system",
     "users receive suggestions or recommendations for datasets", 3, 'm'},
    {"f15", "featured topics",
     "curated data collections related to specific themes are offered", 3, 'm'},
    // (g) Public engagement
    {"g1", "use-case upload feature",
     "users can submit use-cases", 3, 'm'},
    {"g2", "community-sourced / citizen-generated data",
     "users can upload community-sourced or citizen-generated data", 2, 'm'},
    {"g3", "social media support",
     "links to official pages on popular social media platforms are provided", 3, 'm'},
    {"g4", "notification system",
     "users can subscribe to notifications or newsletters", 2, 'm'},
    {"g5", "portal up-to-date information",
     "the information on the portal is current and up-to-date", 3, 'm'},
    {"g6", "sessions and events promotion",
     "meetings, workshops or gatherings around the portal are announced", 3, 'm'},
    {"g7", "personalization features",
     "additional features for registered non-publisher users are provided", 1, 'm'},
    {"g8", "badges",
     "virtual achievements are awarded for completing tasks or reaching milestones", 3, 'm'},
    {"g9", "rewards",
     "tangible or virtual incentives encourage participation", 1, 'm'},
    {"g10", "quizzes",
     "interactive assessments engage users in knowledge testing", 3, 'm'},
    {"g11", "competition",
     "users can compete against each other towards goals or rankings", 2, 'm'},
    {"g12", "request forms",
     "users can formally request specific datasets", 3, 'm'},
    {"g13", "request tracking",
     "users can monitor the progress and status of their requests", 3, 'm'},
    // (h) Feedback mechanisms and service quality
    {"h1", "portal-wide comment sections or forums",
     "discussion areas cover portal-wide topics", 3, 'm'},
    {"h2", "direct publisher-user communication",
     "users can interact directly with publishers", 3, 'm'},
    {"h3", "comment sections or forums for datasets",
     "discussion areas are associated with individual datasets", 3, 'm'},
    {"h4", "dataset usefulness assessment",
     "users can mark a dataset as useful, e.g. by upvoting or liking", 3, 'm'},
    {"h5", "guidelines, tutorials, manuals, FAQs",
     "informative resources help users understand and use the portal", 3, 'm'},
    {"h6", "contact for support",
     "users can reach a support team or customer service", 3, 'm'},
    {"h7", "improvement suggestion form",
     "users can submit feedback, ideas or recommendations for the portal", 3, 'm'},
    // (i) Portal sustainability and collaboration
    {"i1", "sustainability strategy",
     "a strategic plan outlines the long-term operation of the portal", 2, 'm'},
    {"i2", "performance insights dashboard",
     "key performance indicators of the portal are published", 3, 'm'},
    {"i3", "regional governments collaboration mentions",
     "cooperation with local governments or institutions is documented", 2, 'm'},
    {"i4", "international collaboration mentions",
     "cooperation with international governments or institutions is documented", 3, 'm'},
    {"i5", "user satisfaction survey",
     "user feedback on the portal is collected through surveys", 3, 'm'},
    {"i6", "open source codebase",
     "the portal code is open source and the repository link is published", 1, 'm'},
};

constexpr struct {
    char letter;
    const char* name;
} kDimensions[] = {
    {'a', "Multilingualism"},
    {'b', "Navigation"},
    {'c', "General performance"},
    {'d', "Data understandability"},
    {'e', "Data quality"},
    {'f', "Data findability"},
    {'g', "Public engagement"},
    {'h', "Feedback mechanisms and service quality"},
    {'i', "Portal sustainability and collaboration"},
};

Criterion make_criterion(char code) {
    Criterion c;
    switch (code) {
    case 'm':
        c.type = CriterionType::manual;
        break;
    case 's':
        c.type = CriterionType::sampled;
        c.pass_numerator = 10;
        c.pass_denominator = 14;
        c.ratio = 0.7; // the primary rule; 10/14 is its nominal-size instantiation
        break;
    case 'a':
        c.type = CriterionType::dependent_accuracy;
        c.depends_on = "e3";
        c.ratio = 0.7;
        break;
    case 'x':
        c.type = CriterionType::external_score;
        c.min_pass = 61.0;
        break;
    case 't':
        c.type = CriterionType::timed_load;
        c.max_seconds = 4.0;
        break;
    }
    return c;
}

WeightTier tier_from_value(int value) {
    switch (value) {
    case 1: return WeightTier::low;
    case 2: return WeightTier::medium;
    default: return WeightTier::high;
    }
}

} // namespace

FrameworkSchema builtin_schema() {
    FrameworkSchema schema;
    schema.profile_name = "integrated-ogd-usability/default";
    for (const auto& dim_info : kDimensions) {
        Dimension dim;
        dim.letter = dim_info.letter;
        dim.name = dim_info.name;
        for (const auto& row : kRubric) {
            if (row.id[0] != dim_info.letter) continue;
            SubDimension sub;
            sub.id = row.id;
            sub.title = row.title;
            sub.description = row.description;
            sub.weight = tier_from_value(row.weight);
            sub.criterion = make_criterion(row.criterion);
            dim.sub_dimensions.push_back(std::move(sub));
        }
        schema.dimensions.push_back(std::move(dim));
    }

    auto& pub = schema.published_reference;
    pub.claimed_total_max = 177;
    pub.claimed_dimension_maxima = {{'a', 9}, {'d', 26}, {'e', 25}, {'f', 38}, {'h', 18}};
    pub.reported_averages = {{"overall", 84.9}, {"eu", 88.7}, {"gcc", 67.8}};
    pub.reported_top_scores = {{"France", 141}, {"Saudi Arabia", 122}};
    return schema;
}

} // namespace odum
