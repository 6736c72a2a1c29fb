#include "cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "nkbif/dynamics.hpp"
#include "nkbif/ramsey.hpp"
#include "nkbif/stability.hpp"

namespace nkbif::cli {

namespace {

using json = nlohmann::json;

/// Thrown for malformed command lines and configuration files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json mat_json(const Mat2d& m) {
    return json::array({json::array({num_json(m(0, 0)), num_json(m(0, 1))}),
                        json::array({num_json(m(1, 0)), num_json(m(1, 1))})});
}

json complex_json(std::complex<double> c) { return json::array({num_json(c.real()), num_json(c.imag())}); }

json eigen_json(const EigenReportd& e) {
    return {{"trace", num_json(e.trace)},
            {"det", num_json(e.det)},
            {"discriminant", num_json(e.discriminant)},
            {"lambda1", complex_json(e.lambda1)},
            {"lambda2", complex_json(e.lambda2)},
            {"modulus1", num_json(e.modulus1)},
            {"modulus2", num_json(e.modulus2)}};
}

/// Command options whose values come from, in order of precedence: the flag, the
/// JSON --config file, the built-in default.
class OptionSet {
public:
    explicit OptionSet(CLI::App* app) : app_(app) {
        app_->add_option("--config", config_path_, "JSON file with option values (flags override it)");
    }

    void number(const std::string& key, double fallback, const std::string& help) {
        auto& e = add(key, Kind::Number);
        e.number = fallback;
        e.opt = app_->add_option(flag(key), e.number, help);
    }
    void integer(const std::string& key, long long fallback, const std::string& help) {
        auto& e = add(key, Kind::Integer);
        e.integer = fallback;
        e.opt = app_->add_option(flag(key), e.integer, help);
    }
    void text(const std::string& key, const std::string& fallback, const std::string& help) {
        auto& e = add(key, Kind::Text);
        e.text = fallback;
        e.opt = app_->add_option(flag(key), e.text, help);
    }

    void load_config() {
        if (config_path_.empty()) return;
        std::ifstream in(config_path_);
        if (!in) throw UsageError("cannot read config file '" + config_path_ + "'");
        try {
            config_ = json::parse(in);
        } catch (const json::exception& e) {
            throw UsageError("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!config_.is_object()) throw UsageError("config file must hold a JSON object");
        for (const auto& [key, value] : config_.items()) {
            if (!entries_.count(key)) throw UsageError("unknown config key '" + key + "'");
            (void)value;
        }
    }

    bool given(const std::string& key) const {
        const auto& e = entry(key);
        return e.opt->count() > 0 || config_.contains(key);
    }

    double number(const std::string& key) const {
        const auto& e = entry(key);
        if (e.opt->count() > 0 || !config_.contains(key)) return e.number;
        const auto& v = config_.at(key);
        if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
        return v.get<double>();
    }
    long long integer(const std::string& key) const {
        const auto& e = entry(key);
        if (e.opt->count() > 0 || !config_.contains(key)) return e.integer;
        const auto& v = config_.at(key);
        if (!v.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
        return v.get<long long>();
    }
    std::string text(const std::string& key) const {
        const auto& e = entry(key);
        if (e.opt->count() > 0 || !config_.contains(key)) return e.text;
        const auto& v = config_.at(key);
        if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
        return v.get<std::string>();
    }

    CLI::App* app() const { return app_; }

private:
    enum class Kind { Number, Integer, Text };
    struct Entry {
        Kind kind;
        CLI::Option* opt = nullptr;
        double number = 0.0;
        long long integer = 0;
        std::string text;
    };

    static std::string flag(std::string key) {
        for (char& c : key) {
            if (c == '_') c = '-';
        }
        return "--" + key;
    }
    Entry& add(const std::string& key, Kind kind) {
        auto& slot = entries_[key];
        slot = std::make_unique<Entry>();
        slot->kind = kind;
        return *slot;
    }
    const Entry& entry(const std::string& key) const { return *entries_.at(key); }

    CLI::App* app_;
    std::string config_path_;
    json config_ = json::object();
    std::map<std::string, std::unique_ptr<Entry>> entries_;
};

void add_model_options(OptionSet& o, const std::string& default_variant) {
    o.number("gamma", 0.5, "intertemporal elasticity of substitution");
    o.number("kappa", 0.1, "Phillips-curve slope");
    o.number("beta", 0.99, "discount factor in (0, 1]");
    o.number("rho_z", 0.9, "AR(1) coefficient of the demand shock");
    o.number("rho_u", 0.9, "AR(1) coefficient of the cost-push shock");
    o.text("variant", default_variant, "matrix variant: text | appendix-a");
    o.text("output", "", "write results to this file instead of stdout");
}

ModelParams model_from(const OptionSet& o) {
    ModelParams p;
    p.gamma = o.number("gamma");
    p.kappa = o.number("kappa");
    p.beta = o.number("beta");
    p.rho_z = o.number("rho_z");
    p.rho_u = o.number("rho_u");
    p.variant = parse_variant(o.text("variant"));
    p.validate();
    return p;
}

std::string model_comment(const ModelParams& p) {
    return "# gamma=" + num(p.gamma) + " kappa=" + num(p.kappa) + " beta=" + num(p.beta) + " rho_z=" + num(p.rho_z) +
           " rho_u=" + num(p.rho_u) + " variant=" + std::string(to_string(p.variant)) + "\n";
}

std::string format_of(const OptionSet& o, const char* fallback) {
    const std::string f = o.given("format") ? o.text("format") : fallback;
    if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
    return f;
}

void emit(const OptionSet& o, std::ostream& out, const std::string& payload) {
    const std::string path = o.text("output");
    if (path.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + path + "'");
    f << payload;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void require(const OptionSet& o, const std::string& key) {
    if (!o.given(key)) {
        std::string flag = key;
        for (char& c : flag) {
            if (c == '_') c = '-';
        }
        throw UsageError("--" + flag + " is required\n" + o.app()->help());
    }
}

// ---------------------------------------------------------------------------- classify

void setup_classify(OptionSet& o) {
    add_model_options(o, "text");
    o.number("f_pi", 0.0, "response to inflation F_pi");
    o.number("f_x", 0.0, "response to the output gap F_x");
    o.text("format", "json", "json | csv");
}

std::string run_classify(const OptionSet& o) {
    require(o, "f_pi");
    require(o, "f_x");
    const ModelParams p = model_from(o);
    const double fpi = o.number("f_pi");
    const double fx = o.number("f_x");
    if (!std::isfinite(fpi) || !std::isfinite(fx)) throw Error(ErrorKind::InvalidArgument, "gains must be finite");
    const TaylorRule rule{fx, fpi};
    const RegionClass rc = classify_region(p, fx, fpi);
    const auto fl = classify_determinacy(p, rule, InterestRateTiming::ForwardLooking);
    const auto pre = classify_determinacy(p, rule, InterestRateTiming::Predetermined);

    if (format_of(o, "json") == "csv") {
        std::string s = model_comment(p);
        s += "f_pi,f_x,region,stable_count,re_lambda1,im_lambda1,re_lambda2,im_lambda2,modulus1,modulus2,"
             "determinacy_forward_looking,determinacy_predetermined\n";
        const auto& e = rc.eigen;
        s += num(fpi) + "," + num(fx) + "," + std::string(to_string(rc.label)) + "," + std::to_string(rc.stable_count) +
             "," + num(e.lambda1.real()) + "," + num(e.lambda1.imag()) + "," + num(e.lambda2.real()) + "," +
             num(e.lambda2.imag()) + "," + num(e.modulus1) + "," + num(e.modulus2) + "," +
             std::string(to_string(fl.status)) + "," + std::string(to_string(pre.status)) + "\n";
        return s;
    }
    const auto det_json = [](const DeterminacyReport& d) {
        return json{{"status", to_string(d.status)},
                    {"predetermined_variables", d.predetermined},
                    {"required_stable", d.required_stable},
                    {"stable", d.stable}};
    };
    json j = {{"variant", to_string(p.variant)},
              {"f_pi", fpi},
              {"f_x", fx},
              {"region", to_string(rc.label)},
              {"stable_count", rc.stable_count},
              {"eigen", eigen_json(rc.eigen)},
              {"taylor_principle", taylor_principle_holds(p, fx, fpi)},
              {"determinacy",
               {{"forward_looking", det_json(fl)}, {"predetermined", det_json(pre)}}}};
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------- sweep

void setup_window(OptionSet& o) {
    o.number("f_pi_min", -5.0, "lower F_pi bound");
    o.number("f_pi_max", 90.0, "upper F_pi bound");
    o.number("f_x_min", -10.0, "lower F_x bound (default mirrors when gamma < 0)");
    o.number("f_x_max", 2.0, "upper F_x bound (default mirrors when gamma < 0)");
}

Range fx_window(const OptionSet& o, const ModelParams& p) {
    Range r{o.number("f_x_min"), o.number("f_x_max")};
    if (p.gamma < 0.0) {
        if (!o.given("f_x_min")) r.lo = -o.number("f_x_max");
        if (!o.given("f_x_max")) r.hi = -o.number("f_x_min");
        if (o.given("f_x_min") != o.given("f_x_max")) {
            throw UsageError("with gamma < 0 give both --f-x-min and --f-x-max or neither");
        }
    }
    return r;
}

void setup_sweep(OptionSet& o) {
    add_model_options(o, "text");
    setup_window(o);
    o.integer("n_pi", 500, "grid points along F_pi (>= 2)");
    o.integer("n_x", 500, "grid points along F_x (>= 2)");
    o.number("step", 0.0, "grid step on both axes; overrides --n-pi/--n-x");
    o.number("border_tol", kBorderTol, "absolute border tolerance");
    o.text("format", "csv", "csv | json");
}

int points_for_step(const Range& r, double step) {
    const double n = (r.hi - r.lo) / step;
    if (!(n >= 1.0) || n > 1e7) throw UsageError("--step does not fit the window");
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) throw UsageError("--step must divide the window evenly");
    return static_cast<int>(rounded) + 1;
}

std::string run_sweep(const OptionSet& o) {
    const ModelParams p = model_from(o);
    const Range fpi{o.number("f_pi_min"), o.number("f_pi_max")};
    const Range fx = fx_window(o, p);
    if (!(fpi.lo < fpi.hi) || !(fx.lo < fx.hi)) throw Error(ErrorKind::InvalidArgument, "empty sweep window");
    long long n_pi = o.integer("n_pi");
    long long n_x = o.integer("n_x");
    if (o.given("step")) {
        const double step = o.number("step");
        if (!(step > 0.0)) throw UsageError("--step must be positive");
        n_pi = points_for_step(fpi, step);
        n_x = points_for_step(fx, step);
    }
    if (n_pi < 2 || n_x < 2 || n_pi > 100000 || n_x > 100000) {
        throw Error(ErrorKind::InvalidArgument, "grid resolution must lie in [2, 100000] per axis");
    }
    const auto grid = sweep_grid(p, fpi, fx, static_cast<int>(n_pi), static_cast<int>(n_x), o.number("border_tol"));

    if (format_of(o, "csv") == "json") {
        json rows = json::array();
        for (const auto& g : grid) {
            rows.push_back({{"f_pi", g.f_pi},
                            {"f_x", g.f_x},
                            {"region", to_string(g.region.label)},
                            {"stable_count", g.region.stable_count},
                            {"eigen", eigen_json(g.region.eigen)}});
        }
        return json{{"variant", to_string(p.variant)}, {"rows", rows}}.dump() + "\n";
    }
    std::string s = "# sweep n_pi=" + std::to_string(n_pi) + " n_x=" + std::to_string(n_x) + "\n" + model_comment(p);
    s += "f_pi,f_x,region,stable_count,re_lambda1,im_lambda1,re_lambda2,im_lambda2,modulus1,modulus2\n";
    s.reserve(s.size() + grid.size() * 240);
    for (const auto& g : grid) {
        const auto& e = g.region.eigen;
        s += num(g.f_pi);
        s += ',';
        s += num(g.f_x);
        s += ',';
        s += to_string(g.region.label);
        s += ',';
        s += std::to_string(g.region.stable_count);
        for (double v : {e.lambda1.real(), e.lambda1.imag(), e.lambda2.real(), e.lambda2.imag(), e.modulus1,
                         e.modulus2}) {
            s += ',';
            s += num(v);
        }
        s += '\n';
    }
    return s;
}

// ---------------------------------------------------------------------------- borders

void setup_borders(OptionSet& o) {
    add_model_options(o, "text");
    setup_window(o);
    o.integer("samples", 201, "samples per curve (>= 2)");
}

std::string run_borders(const OptionSet& o) {
    const ModelParams p = model_from(o);
    const Range fpi{o.number("f_pi_min"), o.number("f_pi_max")};
    const Range fx = fx_window(o, p);
    const long long n = o.integer("samples");
    if (n < 2 || n > 1000000) throw Error(ErrorKind::InvalidArgument, "--samples must lie in [2, 1000000]");
    if (!(fpi.lo < fpi.hi) || !(fx.lo < fx.hi)) throw Error(ErrorKind::InvalidArgument, "empty window");

    const auto at = [n](const Range& r, long long k) {
        return k == n - 1 ? r.hi : r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    };
    std::string s = "# borders samples=" + std::to_string(n) + "\n" + model_comment(p) + "curve,f_pi,f_x\n";
    for (long long k = 0; k < n; ++k) {
        const double x = at(fx, k);
        s += "saddle_node," + num(saddle_node_border(p, x)) + "," + num(x) + "\n";
    }
    for (long long k = 0; k < n; ++k) {
        const double y = at(fpi, k);
        s += "flip," + num(y) + "," + num(flip_border(p, y)) + "\n";
    }
    for (long long k = 0; k < n; ++k) {
        const double y = at(fpi, k);
        s += "hopf," + num(y) + "," + num(hopf_border(p, y)) + "\n";
    }
    for (long long k = 0; k < n; ++k) {
        const double x = at(fx, k);
        for (double y : discriminant_border(p, x)) s += "discriminant," + num(y) + "," + num(x) + "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------- tables

void setup_tables(OptionSet& o) {
    o.number("gamma", 0.5, "intertemporal elasticity of substitution");
    o.number("kappa", 0.1, "Phillips-curve slope");
    o.number("beta", 0.99, "discount factor in (0, 1]");
    o.number("rho_z", 0.9, "AR(1) coefficient of the demand shock");
    o.number("rho_u", 0.9, "AR(1) coefficient of the cost-push shock");
    o.text("out_dir", ".", "directory receiving table1.csv, table2.csv, table3.csv");
}

ModelParams tables_model(const OptionSet& o, MatrixVariant v) {
    ModelParams p;
    p.gamma = o.number("gamma");
    p.kappa = o.number("kappa");
    p.beta = o.number("beta");
    p.rho_z = o.number("rho_z");
    p.rho_u = o.number("rho_u");
    p.variant = v;
    p.validate();
    return p;
}

std::string table1_csv(const ModelParams& p) {
    const TriangleVertices v = triangle_vertices(p);
    std::string s = "# stability triangle vertices, centre and laissez-faire point\n" + model_comment(p);
    s += "point,lambda1,lambda2,lambda1_plus_lambda2,lambda1_times_lambda2,f_pi,f_x\n";
    for (const Vertex* x : v.rows()) {
        s += std::string(x->label) + "," + num(x->eigen.lambda1.real()) + "," + num(x->eigen.lambda2.real()) + "," +
             num(x->eigen.trace) + "," + num(x->eigen.det) + "," + num(x->f_pi) + "," + num(x->f_x) + "\n";
    }
    return s;
}

std::string weights_prefix(const SweepRow& r) {
    return "\"" + r.label + "\"," + num(r.prefs.mu_pi) + "," + num(r.prefs.mu_x) + "," + num(r.prefs.mu_i);
}

std::string table2_csv(const ModelParams& p, const std::vector<SweepRow>& rows, bool extended) {
    std::string s = "# LQR rule parameters, moduli of the discounted closed loop\n" + model_comment(p);
    s += "minimize_only,mu_pi,mu_x,mu_i,abs_lambda1,abs_lambda2,f_pi,f_x,f_z,f_u";
    s += extended ? ",inside_triangle,error\n" : "\n";
    for (const SweepRow& r : rows) {
        s += weights_prefix(r);
        if (r.ok) {
            for (double v : {r.modulus1, r.modulus2, r.f_pi, r.f_x, r.f_z, r.f_u}) s += "," + num(v);
        } else {
            s += ",,,,,,";
        }
        if (extended) s += std::string(",") + (r.inside_triangle ? "true" : "false") + ",\"" + r.error + "\"";
        s += "\n";
    }
    return s;
}

std::string table3_csv(const ModelParams& p, const std::vector<SweepRow>& rows) {
    std::string notes;
    std::string body = "minimize_only,mu_pi,mu_x,mu_i,x0_z0,x0_u0,pi0_z0,pi0_u0\n";
    for (const SweepRow& r : rows) {
        body += weights_prefix(r);
        if (r.solution && r.solution->N) {
            const Mat2d& n = *r.solution->N;
            body += "," + num(n(0, 0)) + "," + num(n(0, 1)) + "," + num(n(1, 0)) + "," + num(n(1, 1)) + "\n";
        } else {
            body += ",,,,\n";
            notes += "# anchor unavailable for \"" + r.label + "\" (" + num(r.prefs.mu_pi) + ", " + num(r.prefs.mu_x) +
                     ", " + num(r.prefs.mu_i) + "): P_y is singular\n";
        }
    }
    return "# optimal initial anchors y0 = N z0 (coefficients of z0 and u0)\n" + model_comment(p) + notes + body;
}

std::string run_tables(const OptionSet& o) {
    namespace fs = std::filesystem;
    const fs::path dir = o.text("out_dir");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory '" + dir.string() + "'");

    const ModelParams text = tables_model(o, MatrixVariant::Text);
    const ModelParams listing = tables_model(o, MatrixVariant::AppendixA);
    const auto rows = lqr_triangle_sweep(listing, table2_preferences());
    for (const SweepRow& r : rows) {
        if (!r.ok) throw std::runtime_error("LQR solve failed for \"" + r.label + "\": " + r.error);
    }
    const std::vector<std::pair<std::string, std::string>> files = {
        {"table1.csv", table1_csv(text)},
        {"table2.csv", table2_csv(listing, rows, false)},
        {"table3.csv", table3_csv(listing, rows)},
    };
    std::string summary;
    for (const auto& [name, payload] : files) {
        const fs::path path = dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw UsageError("cannot write '" + path.string() + "'");
        f << payload;
        summary += path.string() + "\n";
    }
    return summary;
}

// ---------------------------------------------------------------------------- ramsey

void add_weight_options(OptionSet& o, double mu_pi, double mu_x, double mu_i) {
    o.number("mu_pi", mu_pi, "weight on inflation");
    o.number("mu_x", mu_x, "weight on the output gap");
    o.number("mu_i", mu_i, "weight on the interest rate (> 0)");
}

Preferences prefs_from(const OptionSet& o) {
    Preferences pr{o.number("mu_pi"), o.number("mu_x"), o.number("mu_i")};
    pr.validate();
    return pr;
}

void setup_ramsey(OptionSet& o) {
    add_model_options(o, "appendix-a");
    add_weight_options(o, 1.0, 0.0, 1e-7);
    o.text("sweep", "", "'table2' runs the twelve reference weightings and writes CSV");
}

json ramsey_json(const RamseySolution& s) {
    const auto opt_mat = [](const std::optional<Mat2d>& m) { return m ? mat_json(*m) : json(nullptr); };
    return {{"variant", to_string(s.params.variant)},
            {"weights", {{"mu_pi", s.prefs.mu_pi}, {"mu_x", s.prefs.mu_x}, {"mu_i", s.prefs.mu_i}}},
            {"P_y", mat_json(s.P_y)},
            {"F_y", {{"f_x", num_json(s.F_y(0))}, {"f_pi", num_json(s.F_y(1))}}},
            {"listing",
             {{"P_z", mat_json(s.P_z)},
              {"F_z", {{"f_z", num_json(s.F_z(0))}, {"f_u", num_json(s.F_z(1))}}},
              {"N", opt_mat(s.N)}}},
            {"exact",
             {{"H", mat_json(s.H)},
              {"F_z", {{"f_z", num_json(s.F_z_exact(0))}, {"f_u", num_json(s.F_z_exact(1))}}},
              {"N", opt_mat(s.N_exact)}}},
            {"moduli_discounted", {num_json(s.discounted.min_modulus()), num_json(s.discounted.max_modulus())}},
            {"moduli_undiscounted", {num_json(s.undiscounted.min_modulus()), num_json(s.undiscounted.max_modulus())}},
            {"eigen_discounted", eigen_json(s.discounted)},
            {"residuals",
             {{"riccati", num_json(s.riccati_residual)},
              {"sylvester", num_json(s.sylvester_residual)},
              {"sylvester_exact", num_json(s.exact_sylvester_residual)},
              {"anchor", s.N ? num_json(s.anchor_residual) : json(nullptr)}}},
            {"iterations", s.dare_iterations}};
}

std::string run_ramsey(const OptionSet& o) {
    const ModelParams p = model_from(o);
    const std::string sweep = o.text("sweep");
    if (!sweep.empty()) {
        if (sweep != "table2") throw UsageError("--sweep accepts only 'table2'");
        const auto rows = lqr_triangle_sweep(p, table2_preferences());
        return table2_csv(p, rows, true);
    }
    return ramsey_json(solve_ramsey(p, prefs_from(o))).dump(2) + "\n";
}

// ---------------------------------------------------------------------------- simulate

void setup_simulate(OptionSet& o) {
    add_model_options(o, "appendix-a");
    add_weight_options(o, 1.0, 0.0, 1e-7);
    o.text("regime", "ramsey", "ramsey | msv | taylor");
    o.text("shock_block", "exact", "ramsey shock feedback: exact | listing");
    o.number("f_pi", 1.5, "Taylor rule: response to inflation");
    o.number("f_x", 0.5, "Taylor rule: response to the output gap");
    o.number("f_z", 0.0, "Taylor rule: response to the demand shock");
    o.number("f_u", 0.0, "Taylor rule: response to the cost-push shock");
    o.number("x0", 0.0, "initial output gap (taylor regime)");
    o.number("pi0", 0.0, "initial inflation (taylor regime)");
    o.number("z0", 0.0, "initial demand shock");
    o.number("u0", 0.0, "initial cost-push shock");
    o.integer("horizon", 40, "last period T (>= 1)");
    o.integer("seed", 0, "seed for Gaussian innovations");
    o.number("sd_z", 0.0, "innovation standard deviation, demand shock");
    o.number("sd_u", 0.0, "innovation standard deviation, cost-push shock");
}

std::string run_simulate(const OptionSet& o) {
    const ModelParams p = model_from(o);
    const long long horizon = o.integer("horizon");
    if (horizon < 1 || horizon > 10000000) throw Error(ErrorKind::InvalidArgument, "--horizon must lie in [1, 1e7]");
    const double sd_z = o.number("sd_z"), sd_u = o.number("sd_u");

    ShockSpec shocks = ShockSpec::impulse(o.number("z0"), o.number("u0"));
    std::string seed_note = "none";
    if (o.given("seed")) {
        const long long seed = o.integer("seed");
        if (seed < 0) throw UsageError("--seed must be non-negative");
        shocks = ShockSpec::generated(shocks.z0, shocks.u0, static_cast<std::uint64_t>(seed), sd_z, sd_u);
        seed_note = std::to_string(seed);
    } else if (sd_z != 0.0 || sd_u != 0.0) {
        throw UsageError("--sd-z/--sd-u need --seed");
    }

    const std::string regime = o.text("regime");
    const int T = static_cast<int>(horizon);
    Trajectory tr;
    std::string header = "# simulate regime=" + regime + " horizon=" + std::to_string(T) + "\n# seed=" + seed_note +
                         " sd_z=" + num(sd_z) + " sd_u=" + num(sd_u) + "\n" + model_comment(p);
    if (regime == "ramsey") {
        const std::string block_name = o.text("shock_block");
        if (block_name != "exact" && block_name != "listing") throw UsageError("--shock-block must be exact or listing");
        const ShockBlock block = block_name == "exact" ? ShockBlock::Exact : ShockBlock::Listing;
        const Preferences pr = prefs_from(o);
        const RamseySolution sol = solve_ramsey(p, pr);
        tr = simulate_ramsey(sol, shocks, T, block);
        header += "# weights mu_pi=" + num(pr.mu_pi) + " mu_x=" + num(pr.mu_x) + " mu_i=" + num(pr.mu_i) +
                  " shock_block=" + block_name + "\n";
    } else if (regime == "msv" || regime == "taylor") {
        const TaylorRule rule{o.number("f_x"), o.number("f_pi"), o.number("f_z"), o.number("f_u")};
        if (!rule.finite()) throw Error(ErrorKind::InvalidArgument, "Taylor rule gains must be finite");
        const StructuralMatrices m = build_matrices(p);
        header += "# rule f_pi=" + num(rule.f_pi) + " f_x=" + num(rule.f_x) + " f_z=" + num(rule.f_z) +
                  " f_u=" + num(rule.f_u) + "\n";
        if (regime == "msv") {
            tr = simulate_msv(m, rule, shocks, T);
        } else {
            const EigenReportd e = eig2(closed_loop(m, rule));
            if (e.max_modulus() >= 1.0) {
                throw UsageError("closed loop has an eigenvalue of modulus " + num(e.max_modulus()) +
                                 " >= 1; forward iteration is explosive, use --regime msv");
            }
            tr = simulate_closed_loop(m, rule, Vec2d(o.number("x0"), o.number("pi0")), shocks, T);
        }
    } else {
        throw UsageError("--regime must be ramsey, msv or taylor");
    }

    const bool phi = tr.has_multipliers();
    std::string s = header + (phi ? "t,x,pi,i,z,u,phi_x,phi_pi\n" : "t,x,pi,i,z,u\n");
    for (std::size_t t = 0; t < tr.size(); ++t) {
        s += std::to_string(t);
        for (double v : {tr.x[t], tr.pi[t], tr.i[t], tr.z[t], tr.u[t]}) s += "," + num(v);
        if (phi) s += "," + num(tr.phi_x[t]) + "," + num(tr.phi_pi[t]);
        s += "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------- hopf-demo

void setup_hopf(OptionSet& o) {
    add_model_options(o, "text");
    add_weight_options(o, 1.0, 1.0, 1e-7);
    o.number("f_pi", 1.5, "Taylor rule: response to inflation");
    o.number("f_x", 0.5, "Taylor rule: response to the output gap");
}

std::string run_hopf(const OptionSet& o, std::ostream& err) {
    const ModelParams p = model_from(o);
    const RegimeComparison r = hopf_demo(p, prefs_from(o), TaylorRule{o.number("f_x"), o.number("f_pi")});
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    json j = {{"variant", to_string(p.variant)},
              {"ramsey",
               {{"f_pi", num_json(r.ramsey.F_y(1))},
                {"f_x", num_json(r.ramsey.F_y(0))},
                {"moduli_discounted",
                 {num_json(r.ramsey_discounted.min_modulus()), num_json(r.ramsey_discounted.max_modulus())}},
                {"moduli_undiscounted",
                 {num_json(r.ramsey_undiscounted.min_modulus()), num_json(r.ramsey_undiscounted.max_modulus())}},
                {"det", num_json(r.d_ramsey)},
                {"region", to_string(r.ramsey_region.label)}}},
              {"taylor",
               {{"f_pi", r.nk_rule.f_pi},
                {"f_x", r.nk_rule.f_x},
                {"eigen", eigen_json(r.nk_eigen)},
                {"det", num_json(r.d_nk)},
                {"region", to_string(r.nk_region.label)}}},
              {"crossing",
               r.crosses ? json{{"s", r.crossing_s}, {"f_pi", r.crossing.f_pi}, {"f_x", r.crossing.f_x}}
                         : json(nullptr)},
              {"warnings", r.warnings}};
    return j.dump(2) + "\n";
}

bool color_enabled(const std::ostream& err) {
    if (&err != &std::cerr) return false;
    const char* no_color = std::getenv("NO_COLOR");
    if (no_color != nullptr && no_color[0] != '\0') return false;
    return ::isatty(STDERR_FILENO) != 0;
}

void diagnose(std::ostream& err, const std::string& msg) {
    if (color_enabled(err)) {
        err << "\033[31merror:\033[0m " << msg << "\n";
    } else {
        err << "error: " << msg << "\n";
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability geometry and Ramsey policy for the New-Keynesian model", "nkbif"};
    app.require_subcommand(1);

    struct Command {
        CLI::App* app;
        std::unique_ptr<OptionSet> options;
        std::function<std::string(const OptionSet&)> body;
    };
    std::vector<Command> commands;
    const auto add = [&](const char* name, const char* help, void (*setup)(OptionSet&),
                         std::function<std::string(const OptionSet&)> body) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto opts = std::make_unique<OptionSet>(sub);
        setup(*opts);
        commands.push_back({sub, std::move(opts), std::move(body)});
    };
    add("classify", "classify one Taylor rule (region, eigenvalues, determinacy)", setup_classify, run_classify);
    add("sweep", "classify a grid of Taylor rules", setup_sweep, run_sweep);
    add("borders", "sample the four bifurcation borders", setup_borders, run_borders);
    add("tables", "write table1.csv, table2.csv and table3.csv", setup_tables, run_tables);
    add("ramsey", "solve the Ramsey policy as a discounted LQR", setup_ramsey, run_ramsey);
    add("simulate", "simulate a Ramsey, MSV or Taylor-rule path", setup_simulate, run_simulate);
    add("hopf-demo", "compare the Ramsey sink with a Taylor-rule source", setup_hopf,
        [&err](const OptionSet& o) { return run_hopf(o, err); });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        diagnose(err, e.what());
        const CLI::App* sub = nullptr;
        for (const auto& c : commands) {
            if (c.app->parsed()) sub = c.app;
        }
        err << (sub ? sub->help() : app.help());
        return kInvalidInput;
    }

    for (auto& c : commands) {
        if (!c.app->parsed()) continue;
        try {
            c.options->load_config();
            const std::string payload = c.body(*c.options);
            const bool writes_file = c.app->get_name() != "tables";
            if (writes_file) {
                emit(*c.options, out, payload);
            } else {
                out << payload;
            }
            return kOk;
        } catch (const UsageError& e) {
            diagnose(err, e.what());
            return kInvalidInput;
        } catch (const Error& e) {
            diagnose(err, e.what());
            if (e.kind() == ErrorKind::ConvergenceFailure) err << "last residual: " << num(e.residual()) << "\n";
            return e.is_input_error() ? kInvalidInput : kNumericalFailure;
        } catch (const CLI::Error& e) {
            diagnose(err, e.what());
            return kInvalidInput;
        } catch (const json::exception& e) {
            diagnose(err, e.what());
            return kInvalidInput;
        } catch (const std::exception& e) {
            diagnose(err, e.what());
            return kNumericalFailure;
        }
    }
    return kInvalidInput;
}

}  // namespace nkbif::cli
