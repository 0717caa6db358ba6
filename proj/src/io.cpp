#include "io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <utility>

namespace fpuwave {

using nlohmann::json;

namespace {

void ensure_parent(const std::filesystem::path& path) {
    const auto parent = path.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

json norms_json(const NormTriple& n) {
    return {{"1", number(n.l1)}, {"2", number(n.l2)}, {"inf", number(n.linf)}};
}

json sup_json(const ScaledSupErrors& e) {
    return {{"value", number(e.value)}, {"d1", number(e.d1)}, {"d2", number(e.d2)}};
}

using RowField = std::pair<const char*, std::function<double(const SweepRow&)>>;

const std::vector<RowField>& sweep_fields() {
    static const std::vector<RowField> fields{
        {"delta", [](const SweepRow& r) { return r.delta; }},
        {"ok", [](const SweepRow& r) { return r.ok ? 1.0 : 0.0; }},
        {"lambda_sq", [](const SweepRow& r) { return r.lambda_sq; }},
        {"log_lambda_sq", [](const SweepRow& r) { return r.log_lambda_sq; }},
        {"a", [](const SweepRow& r) { return r.a; }},
        {"b", [](const SweepRow& r) { return r.b; }},
        {"sigma", [](const SweepRow& r) { return r.sigma; }},
        {"energy", [](const SweepRow& r) { return r.energy; }},
        {"log_energy", [](const SweepRow& r) { return r.log_energy; }},
        {"iterations", [](const SweepRow& r) { return static_cast<double>(r.iterations); }},
        {"residual", [](const SweepRow& r) { return r.residual; }},
        {"max_energy_drop", [](const SweepRow& r) { return r.max_energy_drop; }},
        {"err_V_approx_1", [](const SweepRow& r) { return r.errors.v_approx.l1; }},
        {"err_V_approx_2", [](const SweepRow& r) { return r.errors.v_approx.l2; }},
        {"err_V_approx_inf", [](const SweepRow& r) { return r.errors.v_approx.linf; }},
        {"err_R_approx_1", [](const SweepRow& r) { return r.errors.r_approx.l1; }},
        {"err_R_approx_2", [](const SweepRow& r) { return r.errors.r_approx.l2; }},
        {"err_R_approx_inf", [](const SweepRow& r) { return r.errors.r_approx.linf; }},
        {"err_V_limit_1", [](const SweepRow& r) { return r.errors.v_limit.l1; }},
        {"err_V_limit_2", [](const SweepRow& r) { return r.errors.v_limit.l2; }},
        {"err_V_limit_inf", [](const SweepRow& r) { return r.errors.v_limit.linf; }},
        {"err_R_limit_1", [](const SweepRow& r) { return r.errors.r_limit.l1; }},
        {"err_R_limit_2", [](const SweepRow& r) { return r.errors.r_limit.l2; }},
        {"err_R_limit_inf", [](const SweepRow& r) { return r.errors.r_limit.linf; }},
        {"pred_log_lambda_sq", [](const SweepRow& r) { return r.predicted.log_lambda_sq; }},
        {"pred_b", [](const SweepRow& r) { return r.predicted.b; }},
        {"pred_a", [](const SweepRow& r) { return r.predicted.a; }},
        {"speed_ratio", [](const SweepRow& r) { return r.speed_ratio; }},
        {"b_coefficient", [](const SweepRow& r) { return r.b_coefficient; }},
        {"a_coefficient", [](const SweepRow& r) { return r.a_coefficient; }},
        {"tip_sup", [](const SweepRow& r) { return r.tip.value; }},
        {"tip_d1_sup", [](const SweepRow& r) { return r.tip.d1; }},
        {"tip_d2_sup", [](const SweepRow& r) { return r.tip.d2; }},
        {"transition_sup", [](const SweepRow& r) { return r.transition.value; }},
        {"transition_d1_sup", [](const SweepRow& r) { return r.transition.d1; }},
        {"foot_sup", [](const SweepRow& r) { return r.foot.value; }},
        {"foot_d1_sup", [](const SweepRow& r) { return r.foot.d1; }},
        {"foot_d2_sup", [](const SweepRow& r) { return r.foot.d2; }},
    };
    return fields;
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns) {
    if (columns.empty()) throw InvalidArgument("write_csv needs at least one column");
    const std::size_t n = columns.front().values.size();
    for (const auto& c : columns) {
        if (c.values.size() != n) throw InvalidArgument("CSV column '" + c.name + "' has wrong length");
    }
    std::string text;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) text += ',';
        text += columns[c].name;
    }
    text += '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) text += ',';
            text += format_number(columns[c].values[i]);
        }
        text += '\n';
    }
    write_text(path, text);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_profile_csv(const std::filesystem::path& path, const Profile& p) {
    const auto x = p.grid().nodes();
    write_csv(path, {{"x", x}, {"value", p.values()}});
}

void write_scaled_csv(const std::filesystem::path& path, const ScaledProfile& p) {
    std::vector<double> d2 = p.d2;
    if (d2.empty()) d2.assign(p.y.size(), std::nan(""));
    write_csv(path, {{"y", p.y}, {"value", p.values}, {"d1", p.d1}, {"d2", d2}});
}

std::vector<std::string> sweep_csv_columns() {
    std::vector<std::string> out;
    for (const auto& f : sweep_fields()) out.emplace_back(f.first);
    return out;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report) {
    const auto& fields = sweep_fields();
    std::vector<std::vector<double>> data(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
        for (const auto& row : report.rows) data[c].push_back(fields[c].second(row));
    }
    std::vector<CsvColumn> cols;
    for (std::size_t c = 0; c < fields.size(); ++c) cols.push_back({fields[c].first, data[c]});
    write_csv(path, cols);
}

json to_json(const WaveSolution& sol) {
    return {{"delta", sol.delta},
            {"L", sol.grid.half_period()},
            {"k", sol.grid.resolution()},
            {"N", sol.grid.size()},
            {"converged", sol.converged},
            {"iterations", sol.iterations},
            {"last_update", number(sol.last_update)},
            {"residual_inf", number(sol.residual_inf)},
            {"lambda_sq", number(sol.lambda_sq)},
            {"log_lambda_sq", number(sol.log_lambda_sq)},
            {"sigma", number(sol.sigma)},
            {"r_peak", number(sol.r_peak)},
            {"a", number(sol.a)},
            {"b", number(sol.b)},
            {"energy", number(sol.energy)},
            {"log_energy", number(sol.log_energy)},
            {"max_relative_energy_drop", number(sol.max_relative_energy_drop)}};
}

json to_json(const SweepRow& r) {
    json j{{"delta", r.delta}, {"ok", r.ok}};
    if (!r.error.empty()) j["error"] = r.error;
    j["iterations"] = r.iterations;
    j["residual"] = number(r.residual);
    if (!r.ok) return j;
    j["lambda_sq"] = number(r.lambda_sq);
    j["log_lambda_sq"] = number(r.log_lambda_sq);
    j["a"] = number(r.a);
    j["b"] = number(r.b);
    j["sigma"] = number(r.sigma);
    j["energy"] = number(r.energy);
    j["log_energy"] = number(r.log_energy);
    j["max_energy_drop"] = number(r.max_energy_drop);
    j["norm_deviation"] = number(r.norm_deviation);
    j["errors"] = {{"V_approx", norms_json(r.errors.v_approx)},
                   {"R_approx", norms_json(r.errors.r_approx)},
                   {"V_limit", norms_json(r.errors.v_limit)},
                   {"R_limit", norms_json(r.errors.r_limit)}};
    j["predicted"] = {{"lambda_sq", number(r.predicted.lambda_sq)},
                      {"log_lambda_sq", number(r.predicted.log_lambda_sq)},
                      {"b", number(r.predicted.b)},
                      {"a", number(r.predicted.a)}};
    j["speed_ratio"] = number(r.speed_ratio);
    j["b_coefficient"] = number(r.b_coefficient);
    j["a_coefficient"] = number(r.a_coefficient);
    j["scaled_sup_over_delta"] = {{"tip", sup_json(r.tip)},
                                  {"transition", sup_json(r.transition)},
                                  {"foot", sup_json(r.foot)}};
    return j;
}

json to_json(const SweepReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back(to_json(r));
    json fits = json::object();
    for (const auto& spec : sweep_fit_specs()) {
        const auto it = report.fits.find(spec.name);
        if (it == report.fits.end()) continue;
        fits[spec.name] = {{"slope", it->second.slope},
                           {"stderr", it->second.stderr_slope},
                           {"intercept", it->second.intercept},
                           {"points", it->second.points},
                           {"target", spec.target}};
    }
    return {{"model", report.model},
            {"mu", report.mu},
            {"L", report.grid.half_period()},
            {"k", report.grid.resolution()},
            {"rows", rows},
            {"fits", fits}};
}

std::string delta_tag(double delta) { return format_number(delta); }

} // namespace fpuwave
