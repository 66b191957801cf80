#include "dubois/scenario.hpp"
#include "dubois/testgen.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int run_file(const std::string& path, const std::string& format_flag,
             const std::string& out_flag) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open scenario file: " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    dubois::Scenario s;
    try {
        s = dubois::parse_scenario(buf.str());
    } catch (const dubois::ScenarioError& e) {
        std::cerr << "scenario parse errors:\n" << e.joined();
        return 2;
    }
    if (!format_flag.empty())
        s.format = format_flag == "json" ? dubois::ReportFormat::json
                                         : dubois::ReportFormat::text;
    if (!out_flag.empty()) s.output = out_flag;

    dubois::Report rep = dubois::run_scenario(s);
    std::string rendered = dubois::emit_report(rep, s.format);
    if (s.output.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(s.output);
        if (!out) {
            std::cerr << "error: cannot write report to " << s.output << "\n";
            return 2;
        }
        out << rendered;
    }
    return rep.verdict() ? 0 : 1;
}

int selftest() {
    using namespace dubois;
    int failures = 0;
    auto expect = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "  ok    " : "  FAIL  ") << what << "\n";
        if (!ok) ++failures;
    };

    std::cout << "smooth plane family, D = 2\n";
    {
        auto b = build_smooth_plane_family(2);
        auto t = build_tower(b.F, b.W, -2);
        expect(verify_ses_tower(t).passed(), "short exact rows");
        expect(verify_subcomplex(t).passed(), "delta subcomplex squares");
        expect(check_assoc_graded(t, b.reference_relative, smooth_comparison_maps(b, t)).passed(),
               "associated graded comparisons");
        expect(abs_to_rel_triangles(t).passed(), "absolute-to-relative triangles");
        expect(stationary_check(t), "stationary below p = 0");
        expect(fiber_restriction_smooth_check(b, 0).passed(), "fiber restriction at t = 0");
    }

    std::cout << "nodal union family, D = 2\n";
    {
        auto b = build_nodal_union_family(2);
        auto t = build_tower(b.F, b.W, -1);
        expect(verify_ses_tower(t).passed(), "short exact rows");
        expect(verify_subcomplex(t).passed(), "delta subcomplex squares");
        expect(check_assoc_graded(t, b.reference_relative).passed(),
               "associated graded rows (dims-match at p = 0)");
        expect(abs_to_rel_triangles(t).passed(), "absolute-to-relative triangles");

        auto nd = build_nodal_normalization(2);
        auto tX = build_tower(nd.X.F, nd.X.W, -1);
        auto tY = build_tower(nd.Y.F, nd.Y.W, -1);
        auto gamma = restrict_filtered_morphism(nd.gamma_ambient, tX, tY);
        auto alpha = induce_tower_morphism(gamma, tX, tY);
        expect(verify_functorial_diagram(alpha, gamma, tX, tY).passed(),
               "normalization functoriality");
    }

    std::cout << "randomized invariants\n";
    {
        testgen::Rng rng(7);
        bool all = true;
        for (int i = 0; i < 50 && all; ++i) {
            auto c = testgen::random_complex(rng, 3, 6);
            all = validate_complex(c);
        }
        expect(all, "random complexes satisfy d*d = 0");
    }

    std::cout << (failures == 0 ? "selftest: pass\n" : "selftest: FAIL\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verifier for the relative Du Bois tower on concrete models"};
    app.require_subcommand(1);

    std::string scenario_path, format_flag, out_flag;
    CLI::App* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_path, "scenario file (key = value lines)")->required();
    run->add_option("--format", format_flag, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    run->add_option("--out", out_flag, "write the report to a file");

    CLI::App* st = app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11's exit() would return its own codes; the contract here is 2
        // for every usage error and 0 for --help
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (st->parsed()) return selftest();
    return run_file(scenario_path, format_flag, out_flag);
}
