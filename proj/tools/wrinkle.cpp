#include "wrinkle/catalog.hpp"
#include "wrinkle/nearsymp.hpp"
#include "wrinkle/poisson.hpp"
#include "wrinkle/suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

using namespace wf;

constexpr int exit_usage = 2;

struct Global {
    std::string format = "text";
    bool timing = false;
};

void emit(const Reports& reports, const Global& g) {
    std::cout << (g.format == "records" ? format_records(reports) : format_text(reports));
}

int cmd_catalog(const Global& g, const std::optional<std::string>& kind, const std::optional<int>& n) {
    std::vector<FibrationModel> models;
    if (kind) {
        models.push_back(get_model(*kind, n ? *n : default_n(*kind)));
    } else {
        for (const auto& k : model_kinds()) {
            int nn = default_n(k);
            if (n) {
                try {
                    check_kind(k, *n);
                    nn = *n;
                } catch (const std::invalid_argument&) {
                }
            }
            models.push_back(get_model(k, nn));
        }
    }
    if (g.format == "records") {
        for (const auto& m : models) {
            nlohmann::ordered_json j;
            j["kind"] = m.kind;
            j["n"] = m.n;
            j["dimension"] = 2 * m.n;
            j["classification"] = m.classification;
            std::vector<std::string> comps;
            for (const auto& c : m.map.components) comps.push_back(c.str());
            j["components"] = comps;
            std::cout << j.dump() << "\n";
        }
    } else {
        for (const auto& m : models) std::cout << manifest_entry(m) << "\n";
        if (!kind) std::cout << models.size() << " kinds\n";
    }
    return 0;
}

int cmd_derive(const Global& g, const std::string& kind, const std::optional<int>& n, const std::string& k_text) {
    auto m = get_model(kind, n ? *n : default_n(kind));
    Poly k = parse_poly(k_text, m.chart);
    if (k.is_zero()) throw std::invalid_argument("k must be nonzero");
    auto b = flaschka_ratiu(m, k);
    Reports reports = bivector_audit(m, k);
    reports.push_back(casimir_annihilation(b));
    reports.push_back(jacobi(b));
    if (g.format != "records") std::cout << m.id() << "\npi = " << b.pi.str() << "\n\n";
    emit(reports, g);
    return exit_code(reports);
}

int cmd_verify(const Global& g, SuiteOptions opts) {
    opts.timing = g.timing;
    auto reports = run_suite(opts);
    emit(reports, g);
    return exit_code(reports);
}

int cmd_epsilon(const Global& g, const std::string& kind, const std::optional<std::string>& box_text) {
    std::string text = box_text ? *box_text : default_box(kind);
    Box box = parse_box(text, nearsymp_chart());
    try {
        auto e = epsilon_bound(kind, box);
        auto r = make_report("nearsymp:" + kind, "epsilon-bound", e.unbounded || e.value > 0, "box " + text + ": " + e.detail());
        if (g.format == "records") {
            emit({r}, g);
        } else {
            std::cout << (e.unbounded ? std::string("unbounded") : e.value.get_str()) << "\n" << r.detail << "\n";
        }
        return exit_code({r});
    } catch (const BoxRejected& ex) {
        auto r = make_report("nearsymp:" + kind, "epsilon-bound", false, std::string("box rejected: ") + ex.what());
        if (g.format == "records")
            emit({r}, g);
        else
            std::cerr << "rejected: " << ex.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wrinkle: exact checks on fibration models"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "records"}));
    app.add_flag("--timing", g.timing, "Record per-check wall time (otherwise null)");

    auto* catalog = app.add_subcommand("catalog", "List model kinds and their component polynomials");
    std::optional<std::string> c_kind;
    std::optional<int> c_n;
    catalog->add_option("--kind", c_kind, "Only this kind");
    catalog->add_option("--n", c_n, "Dimension parameter (map R^2n -> R^(2n-2))");

    auto* derive = app.add_subcommand("derive", "Build the Poisson bivector and compare with the printed one");
    std::string d_kind, d_k = "1";
    std::optional<int> d_n;
    derive->add_option("--kind", d_kind, "Model kind")->required();
    derive->add_option("--n", d_n, "Dimension parameter");
    derive->add_option("--k", d_k, "Nonvanishing polynomial factor k");

    auto* verify = app.add_subcommand("verify", "Run the invariant and audit suite");
    SuiteOptions opts;
    bool all = false;
    std::optional<std::string> v_model, v_check;
    verify->add_flag("--all", all, "Every model (the default)");
    verify->add_option("--model", v_model, "Only models of this kind");
    verify->add_option("--check", v_check, "Only this check");
    verify->add_option("--seed", opts.seed, "Suite seed");
    verify->add_option("--samples", opts.samples, "Sample points per sampled check");
    verify->add_option("--jobs", opts.jobs, "Worker threads (0: hardware concurrency)");

    auto* epsilon = app.add_subcommand("epsilon", "Certified epsilon bound for fibre positivity");
    std::string e_kind;
    std::optional<std::string> e_box;
    epsilon->add_option("--kind", e_kind, "cusp, swallowtail or butterfly")->required();
    epsilon->add_option("--box", e_box, "Box such as \"|x|<=1,|s|<=1/10\" (default: the kind's documented box)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*catalog) return cmd_catalog(g, c_kind, c_n);
        if (*derive) return cmd_derive(g, d_kind, d_n, d_k);
        if (*verify) {
            if (all && v_model) throw std::invalid_argument("--all and --model are exclusive");
            opts.model = v_model;
            opts.check = v_check;
            return cmd_verify(g, opts);
        }
        if (*epsilon) return cmd_epsilon(g, e_kind, e_box);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
