// beurling-kit: run verification suites over catalog and file-supplied weights.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "beurling/suite.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int run(beurling::SuiteConfig cfg) {
    if (const char* env = std::getenv("BEURLING_KIT_OUT"); env && *env) cfg.out_dir = env;
    beurling::validate_config(cfg);
    beurling::ensure_output_dir(cfg.out_dir);
    const auto report = beurling::run_suite(cfg);
    const auto path = beurling::emit_report(report, cfg.format, cfg.out_dir);
    std::cout << beurling::render_text(report);
    std::cerr << "report written to " << path.string() << '\n';
    return report.all_pass() ? 0 : kExitFail;
}

void list_catalog() {
    for (const auto& name : beurling::catalog_group_names()) {
        const auto g = beurling::catalog_group(name);
        std::cout << name << " (order " << g->order() << (g->is_abelian() ? ", abelian" : "") << ")\n";
        for (const auto& id : beurling::catalog_weight_ids(*g)) std::cout << "  " << id << '\n';
    }
}

int describe(const std::string& id) {
    for (const auto& f : beurling::weight_families())
        if (f.id == id) {
            std::cout << "family  " << f.id << "\nformula " << f.formula << "\nanchor  " << f.anchor << '\n';
            return 0;
        }
    for (const auto& c : beurling::check_catalog())
        if (c.id == id) {
            std::cout << "check   " << c.id << "\nanchor  " << c.anchor << '\n';
            return 0;
        }
    std::cerr << "error: unknown family or check id '" << id << "'\n";
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Fourier algebra verification over finite groups"};
    app.require_subcommand(1);

    beurling::SuiteConfig cfg;
    auto* run_cmd = app.add_subcommand("run", "Run verification suites and write a report");
    run_cmd->add_option("--groups", cfg.groups, "Catalog group names, or 'all'")->delimiter(',');
    run_cmd->add_option("--weights", cfg.weights, "Weight ids, or 'all'")->delimiter(',');
    run_cmd->add_option("--suites", cfg.suites, "Subset of algebra,beurling,classify,spectrum,weights")
        ->delimiter(',');
    run_cmd->add_option("--tol-abs", cfg.tol.abs_eps, "Absolute tolerance")->capture_default_str();
    run_cmd->add_option("--tol-rel", cfg.tol.rel_eps, "Relative tolerance")->capture_default_str();
    run_cmd->add_option("--probe-starts", cfg.probe_starts, "Random starts of the spectrum probe")
        ->capture_default_str();
    run_cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    run_cmd->add_option("--out", cfg.out_dir, "Output directory (BEURLING_KIT_OUT overrides)")->capture_default_str();
    run_cmd->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    run_cmd->add_option("--group-file", cfg.group_files, "Cayley table JSON file; repeatable")->check(CLI::ExistingFile);
    run_cmd->add_option("--weight-file", cfg.weight_files, "Weight description JSON file; repeatable")
        ->check(CLI::ExistingFile);
    bool empty_suites = false;
    run_cmd->callback([&] { empty_suites = run_cmd->count("--suites") > 0 && cfg.suites.empty(); });

    auto* cat_cmd = app.add_subcommand("catalog", "Inspect the built-in catalog");
    cat_cmd->require_subcommand(1);
    auto* list_cmd = cat_cmd->add_subcommand("list", "List catalog groups and weight ids");
    std::string describe_id;
    auto* describe_cmd = cat_cmd->add_subcommand("describe", "Show the formula behind a family or check id");
    describe_cmd->add_option("id", describe_id, "Family or check id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run_cmd) {
            if (empty_suites) throw beurling::ConfigError("empty suite list: nothing to run");
            return run(cfg);
        }
        if (*list_cmd) {
            list_catalog();
            return 0;
        }
        if (*describe_cmd) return describe(describe_id);
    } catch (const beurling::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const beurling::InvalidArgument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitConfig;
}
