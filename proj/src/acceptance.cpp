#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "analysis.hpp"
#include "asymptotics.hpp"
#include "error.hpp"

namespace fpuwave {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Checks {
    bool ok = true;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
};

std::string sci(double v, int digits = 3) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct SweepRun {
    std::string label;
    ForceModel model;
    SweepReport report;
    double seconds;
};

class Context {
public:
    explicit Context(const AcceptanceOptions& o) : opts(o) {}

    const SweepRun& power() {
        if (!power_) power_ = run("power(2, c1=2)", power_family(2, {2.0}));
        return *power_;
    }
    const SweepRun& toda_run() {
        if (!toda_) toda_ = run("toda", toda());
        return *toda_;
    }
    std::vector<const SweepRun*> models() {
        if (opts.toda_only) return {&toda_run()};
        return {&power(), &toda_run()};
    }

    AcceptanceOptions opts;

private:
    SweepRun run(const std::string& label, ForceModel model) {
        SweepOptions so;
        so.solver.tol = opts.tol;
        so.solver.max_iter = opts.max_iter;
        const auto deltas = std::vector<double>{0.27, 0.18, 0.12, 0.09, 0.06, 0.03};
        Timer t;
        auto report = run_sweep(model, deltas, PeriodicGrid::make(opts.L, opts.k), so);
        return {label, std::move(model), std::move(report), t.seconds()};
    }

    std::optional<SweepRun> power_;
    std::optional<SweepRun> toda_;
};

const SweepRow* find_row(const SweepReport& r, double delta) {
    for (const auto& row : r.rows) {
        if (row.delta == delta) return &row;
    }
    return nullptr;
}

CriterionResult finish(int id, std::string name, const Checks& c, std::string summary,
                       json metrics, const Timer& t) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.verdict = c.ok ? Verdict::pass : Verdict::fail;
    r.summary = std::move(summary);
    if (!c.ok) {
        for (const auto& f : c.failures) r.summary += "; FAILED: " + f;
    }
    r.metrics = std::move(metrics);
    r.seconds = t.seconds();
    return r;
}

CriterionResult skipped(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.verdict = Verdict::skipped;
    r.summary = "not a Toda check";
    r.metrics = json::object();
    return r;
}

// 1. RK4 for S'' = 2 exp(-S) against 2 ln cosh y.
CriterionResult limit_ode(Context&) {
    Timer t;
    const auto sol = integrate_limit_ode(10.0, 1e-3);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.y.size(); ++i) {
        const double exact = 2.0 * std::log(std::cosh(sol.y[i]));
        err = std::max(err, std::abs(sol.values[i] - exact));
    }
    const double secs = t.seconds();
    Checks c;
    c.expect(err <= 1e-8, "max error " + sci(err) + " > 1e-8");
    c.expect(secs < 1.0, "runtime " + sci(secs) + " s >= 1 s");
    return finish(1, "limit ODE oracle", c,
                  "max |S - 2 ln cosh y| on [0,10] = " + sci(err) + " (<= 1e-8)",
                  {{"max_error", err}, {"steps", sol.y.size() - 1}, {"runtime_s", secs}}, t);
}

// 2. Closed-form Toda wave against both traveling-wave equations.
CriterionResult toda_residual(Context&) {
    Timer t;
    json per_beta = json::object();
    double worst = 0.0;
    for (double beta : {0.18, 0.5, 1.0}) {
        const double sigma = toda_exact(beta, 0.0).speed;
        double r1 = 0.0, r2 = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const double x = -10.0 + 20.0 * i / (n - 1);
            const auto w = toda_exact(beta, x);
            const auto wp = toda_exact(beta, x + 0.5);
            const auto wm = toda_exact(beta, x - 0.5);
            r1 = std::max(r1, std::abs(-sigma * w.distance_prime - (wp.velocity - wm.velocity)));
            r2 = std::max(r2, std::abs(-sigma * w.velocity_prime -
                                       (std::expm1(wp.distance) - std::expm1(wm.distance))));
        }
        per_beta[sci(beta)] = {{"distance_equation", r1}, {"velocity_equation", r2}};
        worst = std::max({worst, r1, r2});
    }
    const double secs = t.seconds();
    Checks c;
    c.expect(worst <= 1e-9, "sup residual " + sci(worst) + " > 1e-9");
    c.expect(secs < 1.0, "runtime " + sci(secs) + " s >= 1 s");
    return finish(2, "Toda exact-wave residual", c,
                  "sup residual over beta in {0.18,0.5,1}, 1e4 points = " + sci(worst) +
                      " (<= 1e-9)",
                  {{"sup_residual", worst}, {"per_beta", per_beta}, {"runtime_s", secs}}, t);
}

// 3. Residual, normalisation and monotone energy for both sweeps.
CriterionResult solver_soundness(Context& ctx) {
    Timer t;
    Checks c;
    json m = json::object();
    double worst_res = 0.0, worst_norm = 0.0, worst_drop = 0.0;
    for (const auto* run : ctx.models()) {
        json rows = json::array();
        for (std::size_t i = 0; i < run->report.rows.size(); ++i) {
            const auto& row = run->report.rows[i];
            const std::string at = run->label + " delta=" + sci(row.delta);
            if (!row.ok) {
                c.expect(false, at + ": " + row.error);
                rows.push_back({{"delta", row.delta}, {"ok", false}, {"error", row.error}});
                continue;
            }
            const auto& sol = *run->report.solutions[i];
            const double rel = row.residual / lp_norm(sol.V, kInf);
            c.expect(rel <= 1e-10, at + " residual " + sci(rel));
            c.expect(row.norm_deviation <= 1e-12, at + " | ||V||-1 | " + sci(row.norm_deviation));
            c.expect(row.max_energy_drop <= 1e-13, at + " energy drop " + sci(row.max_energy_drop));
            worst_res = std::max(worst_res, rel);
            worst_norm = std::max(worst_norm, row.norm_deviation);
            worst_drop = std::max(worst_drop, row.max_energy_drop);
            rows.push_back({{"delta", row.delta},
                            {"relative_residual", rel},
                            {"norm_deviation", row.norm_deviation},
                            {"max_energy_drop", row.max_energy_drop},
                            {"iterations", row.iterations}});
        }
        c.expect(run->seconds <= 120.0, run->label + " sweep took " + sci(run->seconds) + " s");
        m[run->label] = {{"rows", rows}, {"sweep_seconds", run->seconds}};
    }
    return finish(3, "solver soundness", c,
                  "max relative residual " + sci(worst_res) + " (<= 1e-10), max | ||V||_2 - 1 | " +
                      sci(worst_norm) + " (<= 1e-12), max energy drop " + sci(worst_drop) +
                      " (<= 1e-13)",
                  m, t);
}

// 4. lambda^2 delta^mu exp(-1/delta) -> e.
CriterionResult speed_law(Context& ctx) {
    Timer t;
    Checks c;
    json m = json::object();
    std::string summary;
    const double e = std::numbers::e;
    for (const auto* run : ctx.models()) {
        const auto* first = find_row(run->report, 0.27);
        const auto* last = find_row(run->report, 0.03);
        if (!first || !first->ok || !last || !last->ok) {
            c.expect(false, run->label + ": sweep rows missing");
            continue;
        }
        const double q0 = std::abs(first->speed_ratio - e) / e;
        json devs = json::array();
        for (const auto& row : run->report.rows) {
            if (!row.ok) continue;
            const double q = std::abs(row.speed_ratio - e) / e;
            devs.push_back({{"delta", row.delta}, {"ratio", row.speed_ratio}, {"rel_dev", q}});
            if (row.delta < 0.27) {
                c.expect(q < q0, run->label + " delta=" + sci(row.delta) + " deviation " + sci(q) +
                                     " not below delta=0.27 value " + sci(q0));
            }
        }
        const double q_last = std::abs(last->speed_ratio - e) / e;
        c.expect(q_last <= 0.15, run->label + " deviation at 0.03 = " + sci(q_last));
        if (!summary.empty()) summary += ", ";
        summary += run->label + ": |ratio-e|/e = " + sci(q_last) + " at 0.03 vs " + sci(q0) +
                   " at 0.27";
        m[run->label] = devs;
    }
    return finish(4, "speed law", c, summary + " (<= 0.15, decreasing)", m, t);
}

// 5. b = 2d - 2d^2 + O(d^3) and a = d + (2 ln 2 - 1) d^2 + ...
CriterionResult scalar_expansions(Context& ctx) {
    Timer t;
    Checks c;
    json m = json::object();
    std::string summary;
    const double target = 2.0 * std::numbers::ln2 - 1.0;
    for (const auto* run : ctx.models()) {
        double lo = kInf, hi = 0.0;
        bool same_sign = true;
        int sign = 0;
        json bc = json::array();
        for (const auto& row : run->report.rows) {
            if (!row.ok) {
                c.expect(false, run->label + " delta=" + sci(row.delta) + " failed");
                continue;
            }
            const double v = row.b_coefficient;
            const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
            if (sign == 0) sign = s;
            same_sign = same_sign && s != 0 && s == sign;
            lo = std::min(lo, std::abs(v));
            hi = std::max(hi, std::abs(v));
            bc.push_back({{"delta", row.delta}, {"b_coefficient", v}, {"a_coefficient",
                                                                       row.a_coefficient}});
        }
        const double spread = hi / lo;
        c.expect(same_sign, run->label + ": b coefficient changes sign or vanishes");
        c.expect(spread <= 5.0, run->label + ": b coefficient spread " + sci(spread));
        const auto* last = find_row(run->report, 0.03);
        const double ac = (last && last->ok) ? last->a_coefficient : std::nan("");
        c.expect(std::abs(ac - target) <= 0.15,
                 run->label + ": (a-d)/d^2 at 0.03 = " + sci(ac, 5));
        if (!summary.empty()) summary += ", ";
        summary += run->label + ": b-coef max/min " + sci(spread) + ", a-coef " + sci(ac, 4);
        m[run->label] = {{"rows", bc}, {"b_spread", spread}, {"a_coefficient_0.03", ac}};
    }
    return finish(5, "scalar expansions", c,
                  summary + " (spread <= 5, a-coef in " + sci(target, 4) + " +- 0.15)", m, t);
}

// 6. Error-order slopes and approximation-below-limit ordering for the reference potential.
CriterionResult error_orders(Context& ctx) {
    Timer t;
    Checks c;
    const auto& run = ctx.power();
    struct Band {
        const char* fit;
        const char* label;
        double lo, hi;
    };
    const Band bands[] = {{"R_approx_inf", "||R-Rbar||_inf", 1.7, 2.3},
                          {"V_approx_inf", "||V-Vbar||_inf", 0.8, 1.2},
                          {"V_approx_1", "||V-Vbar||_1", 1.7, 2.3},
                          {"V_limit_1", "||V-V0||_1", 0.8, 1.2}};
    json fits = json::object();
    std::string summary = run.label + " slopes:";
    for (const auto& b : bands) {
        const auto it = run.report.fits.find(b.fit);
        if (it == run.report.fits.end()) {
            c.expect(false, std::string(b.label) + " fit missing");
            continue;
        }
        const double s = it->second.slope;
        fits[b.fit] = {{"slope", s}, {"stderr", it->second.stderr_slope}, {"band", {b.lo, b.hi}}};
        c.expect(s >= b.lo && s <= b.hi, std::string(b.label) + " slope " + sci(s) + " outside [" +
                                             sci(b.lo) + ", " + sci(b.hi) + "]");
        summary += " " + std::string(b.label) + "=" + sci(s);
    }
    json order = json::array();
    for (const auto& row : run.report.rows) {
        if (!row.ok) continue;
        const bool p1 = row.errors.v_approx.l1 < row.errors.v_limit.l1;
        const bool pinf = row.errors.v_approx.linf < row.errors.v_limit.linf;
        c.expect(p1, "||V-Vbar||_1 >= ||V-V0||_1 at delta=" + sci(row.delta));
        c.expect(pinf, "||V-Vbar||_inf >= ||V-V0||_inf at delta=" + sci(row.delta));
        order.push_back({{"delta", row.delta},
                         {"V_approx_1", row.errors.v_approx.l1},
                         {"V_limit_1", row.errors.v_limit.l1},
                         {"V_approx_inf", row.errors.v_approx.linf},
                         {"V_limit_inf", row.errors.v_limit.linf}});
    }
    return finish(6, "error orders", c, summary + "; approximation below limit error at all deltas",
                  {{"model", run.label}, {"fits", fits}, {"ordering", order}}, t);
}

// 7. Scaled sup errors divided by delta stay within a factor 3.
CriterionResult scaled_convergence(Context& ctx) {
    Timer t;
    Checks c;
    const auto& run = ctx.power();
    using Get = std::function<double(const SweepRow&)>;
    const std::pair<const char*, Get> families[] = {
        {"S", [](const SweepRow& r) { return r.tip.value; }},
        {"S'", [](const SweepRow& r) { return r.tip.d1; }},
        {"S''", [](const SweepRow& r) { return r.tip.d2; }},
        {"W", [](const SweepRow& r) { return r.transition.value; }},
        {"T", [](const SweepRow& r) { return r.foot.value; }},
    };
    json m = json::object();
    std::string summary = run.label + " max/min over {0.27,0.09,0.03}:";
    for (const auto& [name, get] : families) {
        double lo = kInf, hi = 0.0;
        json vals = json::array();
        for (double d : {0.27, 0.09, 0.03}) {
            const auto* row = find_row(run.report, d);
            if (!row || !row->ok) {
                c.expect(false, std::string(name) + ": delta=" + sci(d) + " missing");
                continue;
            }
            const double v = get(*row);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            vals.push_back({{"delta", d}, {"sup_over_delta", v}});
        }
        const double ratio = hi / lo;
        c.expect(lo > 0.0 && ratio <= 3.0, std::string(name) + " ratio " + sci(ratio));
        m[name] = {{"values", vals}, {"ratio", ratio}};
        summary += " " + std::string(name) + "=" + sci(ratio);
    }
    return finish(7, "scaled-profile convergence", c, summary + " (<= 3)",
                  {{"model", run.label}, {"families", m}}, t);
}

// 8. Operator identities and the Toda correspondence.
CriterionResult identities(Context& ctx) {
    Timer t;
    Checks c;
    json m = json::object();
    std::string summary;

    if (!ctx.opts.toda_only) {
        const auto grid = PeriodicGrid::make(ctx.opts.L, ctx.opts.k);
        const double tent_err = sup_distance(average(indicator_profile(grid)), tent_profile(grid));
        c.expect(tent_err <= 4 * std::numeric_limits<double>::epsilon(),
                 "A V0 - R0 = " + sci(tent_err));
        m["A_V0_minus_R0"] = tent_err;

        std::mt19937_64 rng(20240501);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst_ratio = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> v(grid.size());
            const double width = 0.05 + 2.5 * unit(rng);
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double x = grid.node(i);
                v[i] = std::abs(x) < width ? unit(rng) + 1.0 - std::abs(x) / width : 0.1 * unit(rng);
            }
            const Profile p = enforce_cone(Profile(grid, std::move(v)));
            const double ratio = lp_norm(average(p), kInf) / lp_norm(p, 2.0);
            worst_ratio = std::max(worst_ratio, ratio);
        }
        c.expect(worst_ratio <= 1.0 + 1e-14, "||A V||_inf / ||V||_2 = " + sci(worst_ratio, 17));
        m["max_sup_over_l2"] = worst_ratio;

        json refine = json::object();
        for (double d : {0.27, 0.09}) {
            std::vector<double> hs, errs;
            for (int k : {32, 64, 128, 256}) {
                const auto g = PeriodicGrid::make(ctx.opts.L, k);
                hs.push_back(g.spacing());
                // The identity holds on the line; skip nodes whose window wraps around.
                const Profile av = average(approx_velocity_profile(g, d));
                double e = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double x = g.node(i);
                    if (std::abs(x) <= ctx.opts.L - 0.5) {
                        e = std::max(e, std::abs(av[i] - approx_distance(d, x)));
                    }
                }
                errs.push_back(e);
            }
            const auto fit = estimate_order(hs, errs);
            c.expect(fit.slope >= 1.8 && fit.slope <= 2.2,
                     "A Vbar - Rbar order at delta=" + sci(d) + " is " + sci(fit.slope));
            refine[sci(d)] = {{"h", hs}, {"sup_error", errs}, {"order", fit.slope}};
        }
        m["A_Vbar_minus_Rbar"] = refine;
        summary = "A V0 = R0 (err " + sci(tent_err) + "), max ||AV||_inf/||V||_2 = " +
                  sci(worst_ratio, 6) + " over 100 cone profiles, A Vbar = Rbar at O(h^2); ";
    }

    double worst_v = 0.0, worst_r = 0.0;
    for (double d : {0.27, 0.09, 0.03}) {
        for (int i = 0; i <= 600; ++i) {
            const double x = -3.0 + 0.01 * i;
            const auto w = toda_exact(2.0 * d, x);
            const double v = -2.0 * std::sinh(0.5 / d) * approx_velocity(d, x) / (1.0 + d);
            const double r = approx_distance(d, x) / (d + d * d);
            worst_v = std::max(worst_v, std::abs(w.velocity - v) / std::abs(w.velocity));
            worst_r = std::max(worst_r, std::abs(w.distance - r) / std::abs(w.distance));
        }
    }
    c.expect(worst_v <= 1e-12, "Toda velocity correspondence rel. error " + sci(worst_v));
    c.expect(worst_r <= 1e-12, "Toda distance correspondence rel. error " + sci(worst_r));
    m["toda_velocity_rel_error"] = worst_v;
    m["toda_distance_rel_error"] = worst_r;
    summary += "Toda(beta=2d) correspondence rel. errors " + sci(worst_v) + ", " + sci(worst_r) +
               " (<= 1e-12)";
    return finish(8, "operator and identity suite", c, summary, m, t);
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::skipped: return "SKIP";
    }
    return "?";
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    Context ctx(opts);
    using Fn = CriterionResult (*)(Context&);
    struct Entry {
        int id;
        const char* name;
        bool toda;
        Fn fn;
    };
    const Entry entries[] = {
        {1, "limit ODE oracle", false, limit_ode},
        {2, "Toda exact-wave residual", true, toda_residual},
        {3, "solver soundness", true, solver_soundness},
        {4, "speed law", true, speed_law},
        {5, "scalar expansions", true, scalar_expansions},
        {6, "error orders", false, error_orders},
        {7, "scaled-profile convergence", false, scaled_convergence},
        {8, "operator and identity suite", true, identities},
    };
    std::vector<CriterionResult> out;
    for (const auto& e : entries) {
        if (opts.toda_only && !e.toda) {
            out.push_back(skipped(e.id, e.name));
            continue;
        }
        try {
            out.push_back(e.fn(ctx));
        } catch (const std::exception& ex) {
            CriterionResult r;
            r.id = e.id;
            r.name = e.name;
            r.verdict = Verdict::fail;
            r.summary = std::string("run failed: ") + ex.what();
            r.metrics = json::object();
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << to_string(r.verdict) << "  [" << r.id << "] " << r.name << ": " << r.summary;
    if (r.verdict != Verdict::skipped) os << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)";
    return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::none_of(results.begin(), results.end(),
                        [](const CriterionResult& r) { return r.verdict == Verdict::fail; });
}

json to_json(const CriterionResult& r) {
    return {{"id", r.id},
            {"name", r.name},
            {"verdict", to_string(r.verdict)},
            {"summary", r.summary},
            {"seconds", r.seconds},
            {"metrics", r.metrics}};
}

} // namespace fpuwave
