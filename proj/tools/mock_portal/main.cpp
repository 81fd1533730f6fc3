// Runnable fixture portal: serves the deterministic catalog over CKAN,
// uData and DCAT endpoints plus the timing/auth/sparql probe targets.

#include <csignal>
#include <cstdio>

#include <CLI11.hpp>

#include "mock_portal.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }
} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mock OGD portal for probe testing"};
    odum::mock::MockPortal::Config config;
    app.add_option("--datasets", config.dataset_count, "catalog size")
        ->check(CLI::PositiveNumber);
    app.add_option("--base-date", config.base_date, "reference date for generated metadata");
    app.add_option("--landing-delay-ms", config.landing_delay_ms, "delay on /");
    app.add_option("--slow-delay-ms", config.slow_delay_ms, "delay on /slow");
    app.add_option("--checker-score", config.checker_score, "score served by /checker");
    CLI11_PARSE(app, argc, argv);

    odum::mock::MockPortal portal(config);
    portal.start();
    std::printf("mock portal listening on %s (%d datasets, base date %s)\n",
                portal.base_url().c_str(), config.dataset_count, config.base_date.c_str());
    std::fflush(stdout);

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    portal.stop();
    return 0;
}
