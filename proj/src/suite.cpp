#include "wrinkle/suite.hpp"

#include "wrinkle/leaves.hpp"
#include "wrinkle/nearsymp.hpp"
#include "wrinkle/poisson.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wf {

namespace {

const std::vector<std::string> catalog_checks = {"bivector-audit", "casimir", "jacobi", "rank", "leaf-relations",
                                                 "leaf-audit"};

// Instances audited per kind: n = 3, plus n = 4, 5 where printed bivectors exist there.
std::vector<FibrationModel> suite_instances(const std::string& kind) {
    std::vector<int> ns = {default_n(kind)};
    for (const auto& p : printed_bivectors())
        if (p.kind == kind)
            for (int n : p.ns)
                if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
    std::sort(ns.begin(), ns.end());
    std::vector<FibrationModel> out;
    for (int n : ns) {
        try {
            check_kind(kind, n);
        } catch (const std::invalid_argument&) {
            continue;
        }
        out.push_back(get_model(kind, n));
    }
    return out;
}

Poly k_poly(const std::string& text, const ChartPtr& chart) {
    if (text.find("x1") != std::string::npos && !chart->find("x1")) {
        std::string t = text;
        t.replace(t.find("x1"), 2, chart->name(0));
        return parse_poly(t, chart);
    }
    return parse_poly(text, chart);
}

}  // namespace

// Printed bivectors are given for k = 1 and scale linearly in k.
Reports bivector_audit(const FibrationModel& m, const Poly& k) {
    Reports out;
    auto computed = flaschka_ratiu(m, k).pi;
    for (const auto& p : printed_bivectors()) {
        if (p.kind != m.kind || std::find(p.ns.begin(), p.ns.end(), m.n) == p.ns.end()) continue;
        auto cmp = compare_bivectors(computed, printed_bivector(p, m.chart, m.n) * k);
        const bool ok = cmp.verdict == Agreement::match || cmp.verdict == Agreement::match_sign;
        std::string what = p.id + " (" + p.label + (p.listed ? "" : ", not in the reproduction list") + "): " +
                           to_string(cmp.verdict);
        if (cmp.verdict == Agreement::match_scalar) what += ", printed = " + cmp.scalar.get_str() + " * computed";
        auto r = make_report(m.id(), "bivector-audit", true, what);
        if (!ok) {
            r.status = Status::mismatch;
            std::string w;
            for (const auto& d : cmp.deviations) w += (w.empty() ? "" : "; ") + d;
            r.witness = "computed " + cmp.computed + " | printed " + cmp.printed + (w.empty() ? "" : " | " + w);
        } else {
            r.witness = cmp.computed;
        }
        out.push_back(std::move(r));
    }
    if (out.empty()) out.push_back(make_report(m.id(), "bivector-audit", true, "no printed bivector at this n"));
    return out;
}

namespace {

Reports poisson_check(const FibrationModel& m, const std::string& check) {
    Reports out;
    for (const auto& kt : suite_k_texts()) {
        auto b = flaschka_ratiu(m, k_poly(kt, m.chart));
        out.push_back(check == "casimir" ? casimir_annihilation(b) : jacobi(b));
    }
    return out;
}

std::string point_text(const std::vector<Rational>& q) {
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + q[i].get_str();
    return s + ")";
}

Reports rank_check(const FibrationModel& m, int samples, Rng& rng) {
    auto b = flaschka_ratiu(m);
    for (const auto& q : regular_points_sample(m, samples, rng)) {
        int r = rank_at(b, q);
        if (r != 2)
            return {make_report(m.id(), "rank", false, "rank " + std::to_string(r) + " at a regular point",
                                point_text(q))};
    }
    for (const auto& q : critical_points_sample(m, samples, rng)) {
        int r = rank_at(b, q);
        if (r != 0)
            return {make_report(m.id(), "rank", false, "rank " + std::to_string(r) + " at a critical point",
                                point_text(q))};
    }
    return {make_report(m.id(), "rank", true,
                        "rank 2 at " + std::to_string(samples) + " regular points, rank 0 at " +
                            std::to_string(samples) + " critical points")};
}

Reports leaf_audit(const FibrationModel& m, int samples, Rng& rng) {
    Reports out;
    for (auto& a : audit_leaf_formulas(m, samples, rng)) {
        a.report.witness = render_table(a, m.chart);
        out.push_back(std::move(a.report));
    }
    if (out.empty()) out.push_back(make_report(m.id(), "leaf-audit", true, "no printed leaf formula for this model"));
    return out;
}

Reports epsilon_check(const std::string& kind) {
    const std::string label = "nearsymp:" + kind;
    const std::string box = default_box(kind);
    try {
        auto e = epsilon_bound(kind, box);
        bool ok = e.unbounded || e.value > 0;
        return {make_report(label, "epsilon-bound", ok, "box " + box + ": " + e.detail())};
    } catch (const std::exception& ex) {
        return {make_report(label, "epsilon-bound", false, "box " + box + ": " + ex.what())};
    }
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> c = {"bivector-audit", "casimir",          "jacobi",
                                               "rank",           "leaf-relations",   "leaf-audit",
                                               "near-symplectic", "fibre-positivity", "epsilon-bound",
                                               "darboux"};
    return c;
}

std::vector<std::string> suite_k_texts() { return {"1", "1 + x1^2", "7"}; }

std::vector<std::string> suite_model_kinds() {
    auto k = model_kinds();
    for (const auto& a : auxiliary_kinds()) k.push_back(a);
    for (const auto& n : nearsymp_kinds())
        if (std::find(k.begin(), k.end(), n) == k.end()) k.push_back(n);
    k.push_back("darboux");
    return k;
}

std::vector<SuiteTask> suite_tasks(const SuiteOptions& opts) {
    if (opts.model) {
        auto kinds = suite_model_kinds();
        if (std::find(kinds.begin(), kinds.end(), *opts.model) == kinds.end())
            throw std::invalid_argument("unknown model '" + *opts.model + "'");
    }
    if (opts.check && std::find(check_names().begin(), check_names().end(), *opts.check) == check_names().end())
        throw std::invalid_argument("unknown check '" + *opts.check + "'");
    if (opts.samples < 1) throw std::invalid_argument("samples must be positive");

    std::vector<SuiteTask> tasks;
    auto want = [&](const std::string& kind, const std::string& check) {
        return (!opts.model || *opts.model == kind) && (!opts.check || *opts.check == check);
    };
    const int samples = opts.samples;
    auto kinds = model_kinds();
    for (const auto& a : auxiliary_kinds()) kinds.push_back(a);
    for (const auto& kind : kinds) {
        for (const auto& m : suite_instances(kind)) {
            for (const auto& check : catalog_checks) {
                if (!want(kind, check)) continue;
                std::function<Reports(Rng&)> run;
                if (check == "bivector-audit")
                    run = [m](Rng&) { return bivector_audit(m, Poly(m.chart, 1)); };
                else if (check == "casimir" || check == "jacobi")
                    run = [m, check](Rng&) { return poisson_check(m, check); };
                else if (check == "rank")
                    run = [m, samples](Rng& rng) { return rank_check(m, samples, rng); };
                else if (check == "leaf-relations")
                    run = [m, samples](Rng& rng) { return Reports{leaf_relations(flaschka_ratiu(m), samples, rng)}; };
                else
                    run = [m, samples](Rng& rng) { return leaf_audit(m, samples, rng); };
                tasks.push_back({kind, m.id(), check, std::move(run)});
            }
        }
    }
    const int ns_samples = std::max(1, samples / 5);
    for (const auto& kind : nearsymp_kinds()) {
        const std::string label = "nearsymp:" + kind;
        if (want(kind, "near-symplectic"))
            tasks.push_back({kind, label, "near-symplectic", [kind, ns_samples](Rng& rng) {
                                 return assemble_and_verify(kind, ns_samples, rng).reports;
                             }});
        if (kind == "fold") continue;
        if (want(kind, "fibre-positivity"))
            tasks.push_back({kind, label, "fibre-positivity", [kind](Rng&) { return fibre_positivity(kind); }});
        if (want(kind, "epsilon-bound"))
            tasks.push_back({kind, label, "epsilon-bound", [kind](Rng&) { return epsilon_check(kind); }});
    }
    if (want("darboux", "darboux"))
        tasks.push_back({"darboux", "darboux", "darboux", [ns_samples](Rng& rng) {
                             return Reports{darboux_normal_form_check(1, ns_samples, rng)};
                         }});
    return tasks;
}

Reports run_suite(const SuiteOptions& opts) {
    auto tasks = suite_tasks(opts);
    std::vector<Reports> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& t = tasks[i];
            Rng rng = derived_rng(opts.seed, t.model + "/" + t.check);
            auto start = std::chrono::steady_clock::now();
            try {
                results[i] = t.run(rng);
            } catch (const std::exception& e) {
                results[i] = {make_report(t.model, t.check, false, std::string("error: ") + e.what())};
            }
            if (opts.timing) {
                double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                for (auto& r : results[i]) r.timing_ms = ms / static_cast<double>(results[i].size());
            }
        }
    };
    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    Reports out;
    for (auto& r : results)
        for (auto& x : r) out.push_back(std::move(x));
    return out;
}

std::string to_record(const CheckReport& r) {
    nlohmann::ordered_json j;
    j["model"] = r.model;
    j["check"] = r.check;
    j["status"] = to_string(r.status);
    j["detail"] = r.detail;
    j["witness"] = r.witness ? nlohmann::ordered_json(*r.witness) : nlohmann::ordered_json(nullptr);
    j["timing"] = r.timing_ms ? nlohmann::ordered_json(*r.timing_ms) : nlohmann::ordered_json(nullptr);
    return j.dump();
}

std::string format_records(const Reports& reports) {
    std::string out;
    for (const auto& r : reports) out += to_record(r) + "\n";
    return out;
}

std::string format_text(const Reports& reports) {
    std::ostringstream os;
    std::map<Status, int> count;
    std::size_t wm = 5, wc = 5;
    for (const auto& r : reports) wm = std::max(wm, r.model.size()), wc = std::max(wc, r.check.size());
    for (const auto& r : reports) {
        ++count[r.status];
        std::string st = to_string(r.status);
        os << st << std::string(9 - st.size(), ' ') << r.model << std::string(wm + 2 - r.model.size(), ' ') << r.check
           << std::string(wc + 2 - r.check.size(), ' ') << r.detail;
        if (r.timing_ms) os << "  [" << static_cast<long>(*r.timing_ms + 0.5) << " ms]";
        os << "\n";
        if (r.witness && r.status != Status::pass) {
            std::istringstream w(*r.witness);
            for (std::string line; std::getline(w, line);) os << "         | " << line << "\n";
        }
    }
    os << "summary: " << reports.size() << " records, " << count[Status::pass] << " pass, " << count[Status::mismatch]
       << " mismatch, " << count[Status::fail] << " fail\n";
    return os.str();
}

int exit_code(const Reports& reports) {
    return std::any_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.status == Status::fail; })
               ? 1
               : 0;
}

}  // namespace wf
