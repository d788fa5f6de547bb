// moyal-metrics: quantum length vs spectral distance on the truncated Moyal plane.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "moyal/lipschitz_solver.hpp"
#include "moyal/quantum_length.hpp"
#include "moyal/spectral_distance.hpp"
#include "moyal/star_product.hpp"
#include "moyal/tensor_space.hpp"

using namespace moyal;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct Row {
    std::string quantity;
    std::string spec1, spec2;
    double value = 0.0;
    std::string method;
    int truncation = 0;
    double residual = 0.0;
    bool converged = true;
};

struct Output {
    std::vector<Row> rows;
    bool ok = true;

    void add(const std::string& q, const std::string& s1, const std::string& s2,
             const DistanceReport& r) {
        rows.push_back({q, s1, s2, r.value, r.method, r.truncation, r.residual, r.converged});
    }
    void add(const std::string& q, double v, const std::string& method = "analytic",
             int truncation = 0, double residual = 0.0) {
        rows.push_back({q, "", "", v, method, truncation, residual, true});
    }
    void require(bool cond) { ok = ok && cond; }

    std::string csv() const {
        std::string out = "quantity,spec1,spec2,value,method,truncation,residual,converged\n";
        for (const auto& r : rows)
            out += r.quantity + "," + csv_field(r.spec1) + "," + csv_field(r.spec2) + "," +
                   fmt(r.value) + "," + r.method + "," + std::to_string(r.truncation) + "," +
                   fmt(r.residual) + "," + (r.converged ? "1" : "0") + "\n";
        return out;
    }
    std::string json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json j;
            j["quantity"] = r.quantity;
            if (!r.spec1.empty()) j["spec1"] = r.spec1;
            if (!r.spec2.empty()) j["spec2"] = r.spec2;
            j["value"] = r.value;
            j["method"] = r.method;
            j["truncation"] = r.truncation;
            j["residual"] = r.residual;
            j["converged"] = r.converged;
            arr.push_back(j);
        }
        nlohmann::json top;
        top["rows"] = arr;
        top["pass"] = ok;
        return top.dump(2);
    }
};

void emit(const Output& out, const std::string& format, const std::string& path) {
    std::string text = (format == "json") ? out.json() : out.csv();
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open " + path);
        os << text;
    }
}

int default_truncation() {
    if (const char* env = std::getenv("MOYAL_TRUNCATION")) {
        int v = std::atoi(env);
        if (v >= 4) return v;
    }
    return 32;
}

std::vector<int> parse_schedule(const std::string& s) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stoi(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

int run_spectrum(int levels, const ModelParams& params, const std::string& format,
                 const std::string& path) {
    Output out;
    auto rows = spectrum_L(params.truncation, params.lambda_p, levels);
    for (const auto& r : rows) {
        Row row;
        row.quantity = "L_level_" + std::to_string(r.level);
        row.value = r.numeric;
        row.method = "operator-evaluation";
        row.truncation = params.truncation;
        row.residual = std::abs(r.numeric - r.analytic);
        row.converged = r.reliable;
        row.spec1 = fmt(r.analytic);                     // analytic target
        row.spec2 = std::to_string(r.multiplicity);      // truncated multiplicity
        out.rows.push_back(row);
        out.require(row.residual <= std::max(params.tol, 1e-9 * params.lambda_p));
    }
    emit(out, format, path);
    return out.ok ? 0 : 1;
}

void write_trace(const SolverTrace& trace, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "kind,index,value\n";
    for (const auto& [n, v] : trace.per_truncation)
        os << "truncation," << n << "," << fmt(v) << "\n";
    for (size_t i = 0; i < trace.objective.size(); ++i)
        os << "objective," << i << "," << fmt(trace.objective[i]) << "\n";
}

int run_compare(const StateSpec& s1, const StateSpec& s2, const ModelParams& params,
                const std::vector<int>& schedule, const std::string& trace_path,
                const std::string& format, const std::string& path) {
    Output out;
    DistanceReport r2 = d_L2(s1, s2, params);
    out.add("d_L2", s1.text(), s2.text(), r2);
    DistanceReport rl = d_L(s1, s2, params);
    out.add("d_L", s1.text(), s2.text(), rl);
    out.require(rl.value <= std::sqrt(r2.value) + params.tol);
    DistanceReport rm = d_L_mod(s1, s2, params);
    out.add("d_L_mod", s1.text(), s2.text(), rm);
    if (r2.analytic_value && r2.operator_value)
        out.require(std::abs(*r2.analytic_value - *r2.operator_value) <=
                    std::max(1e-6, 10 * params.tol));

    std::optional<double> dd = analytic_dist(s1, s2, params.lambda_p);
    if (dd) {
        DistanceReport rd;
        rd.value = *dd;
        rd.method = "analytic";
        out.add("d_D", s1.text(), s2.text(), rd);
        if (rm.value > 1e-12) out.add("ratio_dD_dLmod", *dd / rm.value);
    } else {
        // triangle bracket applies on pairs of generalized coherent states
        auto coh = [](const StateSpec& s) -> std::optional<std::pair<int, Vec2>> {
            if (const auto* e = std::get_if<Eigenstate>(&s.v)) return {{e->m, Vec2::Zero()}};
            if (const auto* c = std::get_if<Coherent>(&s.v)) return {{c->m, c->kappa}};
            return std::nullopt;
        };
        auto c1 = coh(s1), c2 = coh(s2);
        if (c1 && c2) {
            DistBounds b = dist_bounds(std::min(c1->first, c2->first),
                                       std::max(c1->first, c2->first), c1->second, c2->second,
                                       params.lambda_p);
            out.add("d_D_lower", b.lower, "bounds-only");
            out.add("d_D_upper", b.upper, "bounds-only");
        }
    }

    SolverConfig cfg;
    cfg.tol = std::max(params.tol, 1e-9);
    cfg.schedule = schedule.empty() ? std::vector<int>{params.truncation,
                                                       params.truncation + params.truncation / 2}
                                    : schedule;
    SolverTrace trace;
    DistanceReport rs =
        solve_distance(s1, s2, cfg, params.lambda_p, trace_path.empty() ? nullptr : &trace);
    if (!trace_path.empty()) write_trace(trace, trace_path);
    rs.method = dd ? "solver" : "solver-only";
    out.add("d_D_solver", s1.text(), s2.text(), rs);
    if (dd) out.require(std::abs(rs.value - *dd) <= std::max(1e-4, 20 * cfg.tol));

    if (dd) {
        double linv2 = lambda_inv2(s1, s2, params);
        DistanceReport rp;
        rp.value = std::sqrt(*dd * *dd + linv2);
        rp.method = "analytic";
        out.add("d_Dprime_cross", s1.text(), s2.text(), rp);
    }
    emit(out, format, path);
    return out.ok ? 0 : 1;
}

int run_ratio(int m, int n_max, const Vec2& kappa, const Vec2& kappa_t, const ModelParams& params,
              const std::string& format, const std::string& path) {
    Output out;
    auto rows = ratio_convergence(m, kappa, kappa_t, n_max, params.lambda_p);
    for (const auto& r : rows) {
        Row row;
        row.quantity = "ratio_n_" + std::to_string(r.n);
        row.value = r.ratio;
        row.method = (r.dd_lower == r.dd_upper) ? "analytic" : "bounds-midpoint";
        row.residual = r.dd_upper - r.dd_lower;
        row.spec1 = fmt(r.d_prime);
        row.spec2 = fmt(r.dd_mid);
        out.rows.push_back(row);
    }
    emit(out, format, path);
    return 0;
}

int run_geodesic(const ModelParams& params, const std::string& format, const std::string& path) {
    Output out;
    int n = params.truncation;
    TruncatedOperator l0 = optimal_element_l0(n, params.lambda_p);
    auto [l1, l2, l3] = candidate_elements(n, params.lambda_p);
    double r0 = geodesic_residual(l0);
    out.add("geodesic_residual_l0", r0, "operator-evaluation", n);
    out.require(r0 < 1e-10);
    int idx = 1;
    for (const auto* li : {&l1, &l2, &l3}) {
        double r = geodesic_residual(*li);
        out.add("geodesic_residual_l" + std::to_string(idx), r, "operator-evaluation", n);
        out.require(r > 0.01);
        ++idx;
    }
    Matrix dz = deriv_z(l0).entries;
    double worst = 0.0;
    for (int k = 0; k + 2 < n; ++k)
        worst = std::max(worst, std::abs(dz(k + 1, k) - Complex(1 / std::sqrt(2.0))));
    out.add("l0_shift_gap", worst, "operator-evaluation", n);
    out.require(worst < 1e-12);
    out.add("seminorm_l0", seminorm(l0), "operator-evaluation", n);
    emit(out, format, path);
    return out.ok ? 0 : 1;
}

int run_double(int m, const ModelParams& params, const std::string& format,
               const std::string& path) {
    Output out;
    DoubledTripleParams lam = fix_lambda(m, params.lambda_p);
    out.add("Lambda", lam.lambda_cap);
    StateSpec wm{Eigenstate{m}};
    double internal = doubled_distance(wm, 1, wm, 2, lam, params.lambda_p);
    out.add("d_Dprime_two_copies", internal);
    out.require(std::abs(internal - 1.0 / lam.lambda_cap) < 1e-12);

    // deterministic kappa grid; identcor identity rows
    const double kap_vals[] = {0.0, 0.5, -1.5, 2.0};
    for (double a : kap_vals)
        for (double b : kap_vals) {
            StateSpec s1{Coherent{m, Vec2(a, b)}};
            StateSpec s2{Coherent{m, Vec2(b, -a)}};
            double dd = doubled_distance(s1, 1, s2, 2, lam, params.lambda_p);
            double dl2 = coherent_d_L2(m, m, Vec2(a, b), Vec2(b, -a), params.lambda_p);
            Row row;
            row.quantity = "identcor_gap";
            row.spec1 = s1.text();
            row.spec2 = s2.text();
            row.value = dd * dd - dl2;
            row.method = "analytic";
            out.rows.push_back(row);
            out.require(std::abs(row.value) < 1e-10);
        }
    emit(out, format, path);
    return out.ok ? 0 : 1;
}

int run_star(const std::string& check, int resolution, double theta, double extent,
             const std::string& dump, const ModelParams& params, const std::string& format,
             const std::string& path) {
    Output out;
    if (extent <= 0.0) extent = 12.0 * std::sqrt(theta);
    const bool all = check == "all";

    GridFunction g0 = gaussian_ground(extent, resolution, theta);
    if (all || check == "projector") {
        double res = window_norm(star(g0, g0).samples - g0.samples);
        out.add("projector_residual", res, "operator-evaluation", resolution);
        out.require(res <= 1e-6);
    }
    if (all || check == "assoc") {
        GridFunction ga = sample_grid(extent, resolution, theta, [&](double x, double y) {
            return Complex(2.0 * std::exp(-((x - 1) * (x - 1) + (y + 0.5) * (y + 0.5)) / theta), 0);
        });
        GridFunction gb = sample_grid(extent, resolution, theta, [&](double x, double y) {
            return Complex(2.0 * std::exp(-((x + 0.7) * (x + 0.7) + (y - 0.3) * (y - 0.3)) /
                                          (1.3 * theta)),
                           0);
        });
        double res = associativity_check(g0, ga, gb);
        out.add("associativity_residual", res, "operator-evaluation", resolution);
        out.require(res <= 1e-6);
    }
    if (all || check == "commutator") {
        const double k1 = M_PI / extent;
        GridFunction f(extent, resolution, theta), g(extent, resolution, theta);
        for (int i = 0; i < resolution; ++i)
            for (int j = 0; j < resolution; ++j) {
                f.samples(i, j) = std::sin(k1 * f.coord(i)) / k1;
                g.samples(i, j) = std::sin(k1 * g.coord(j)) / k1;
            }
        Matrix comm = star(f, g).samples - star(g, f).samples;
        // divide out the exact surrogate curvature profile, then compare to i theta
        double sinc = std::sin(0.5 * theta * k1 * k1) / (0.5 * theta * k1 * k1);
        double worst = 0.0;
        int lo = resolution / 5, hi = 4 * resolution / 5;
        for (int i = lo; i < hi; ++i)
            for (int j = lo; j < hi; ++j) {
                double prof = sinc * std::cos(k1 * f.coord(i)) * std::cos(k1 * f.coord(j));
                if (std::abs(prof) < 0.05) continue;
                worst = std::max(worst, std::abs(comm(i, j) / prof - Complex(0, theta)));
            }
        out.add("commutator_gap", worst, "operator-evaluation", resolution);
        out.require(worst <= 1e-6);
    }
    if (all || check == "limit") {
        GridFunction ga = sample_grid(extent, resolution, theta, [&](double x, double y) {
            return Complex(2.0 * std::exp(-((x - 1) * (x - 1) + (y + 0.5) * (y + 0.5)) / theta), 0);
        });
        auto devs = commutative_limit(ga, g0, {theta, theta / 2, theta / 4, theta / 8});
        for (size_t i = 0; i < devs.size(); ++i) {
            out.add("limit_dev_" + std::to_string(i), devs[i], "operator-evaluation", resolution);
            if (i) out.require(devs[i] < devs[i - 1]);
        }
    }
    if (!dump.empty()) {
        GridFunction s = star(g0, g0);
        if (dump.size() > 4 && dump.substr(dump.size() - 4) == ".csv")
            write_grid_csv(s, dump);
        else
            write_grid_binary(s, dump);
    }
    emit(out, format, path);
    (void)params;
    return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric structures on the truncated Moyal plane: DFR length operator vs "
                 "spectral distance"};
    app.require_subcommand(1);
    app.fallthrough();  // model flags may follow the subcommand name

    ModelParams params;
    params.truncation = default_truncation();
    std::string format = "csv", out_path, schedule_str;
    app.add_option("--lambda-p", params.lambda_p, "length unit lambda_P (theta = lambda_P^2)");
    app.add_option("--truncation", params.truncation, "number-basis truncation N");
    app.add_option("--schedule", schedule_str, "comma separated truncation schedule");
    app.add_option("--tol", params.tol, "convergence / check tolerance");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "output file (stdout when absent)");

    auto* spectrum = app.add_subcommand("spectrum", "low-lying spectrum of the length operator");
    int levels = 4;
    spectrum->add_option("--levels", levels, "number of distinct levels")
        ->check(CLI::NonNegativeNumber);

    auto* compare = app.add_subcommand("compare", "all metric quantities for a pair of states");
    std::string spec1_txt, spec2_txt, trace_path;
    compare->add_option("spec1", spec1_txt, "first state (eig:m|coh:m:k1,k2|sph:m,n:x,y,z|vec:...)")
        ->required();
    compare->add_option("spec2", spec2_txt, "second state")->required();
    compare->add_option("--trace", trace_path, "write solver trace CSV to this path");

    auto* ratio = app.add_subcommand("ratio", "high-energy convergence of d_D toward d'_L");
    int ratio_m = 0, ratio_nmax = 50;
    std::vector<double> kap{0, 0}, kap_t{0, 0};
    ratio->add_option("--m", ratio_m, "lower eigenstate index");
    ratio->add_option("--n-max", ratio_nmax, "largest eigenstate index");
    ratio->add_option("--kappa", kap, "translation of the first state")->expected(2);
    ratio->add_option("--kappa-t", kap_t, "translation of the second state")->expected(2);

    auto* geodesic = app.add_subcommand("geodesic", "optimal element vs the length generators");

    auto* dbl = app.add_subcommand("double", "doubled-triple identities at fixed Lambda");
    int dbl_m = 0;
    dbl->add_option("--m", dbl_m, "eigenstate family index");

    auto* star_cmd = app.add_subcommand("star", "grid Moyal product checks");
    std::string star_check = "all", star_dump;
    int star_res = 256;
    double star_theta = 1.0, star_extent = 0.0;
    star_cmd->add_option("--check", star_check, "all|projector|assoc|commutator|limit")
        ->check(CLI::IsMember({"all", "projector", "assoc", "commutator", "limit"}));
    star_cmd->add_option("--resolution", star_res, "grid points per axis (power of two)");
    star_cmd->add_option("--theta", star_theta, "deformation parameter");
    star_cmd->add_option("--extent", star_extent, "half-width of the domain (default 12 sqrt(theta))");
    star_cmd->add_option("--dump", star_dump, "write g0*g0 to file (.csv or binary)");

    CLI11_PARSE(app, argc, argv);

    try {
        params.validate();
        std::vector<int> schedule =
            schedule_str.empty() ? std::vector<int>{} : parse_schedule(schedule_str);
        if (spectrum->parsed()) return run_spectrum(levels, params, format, out_path);
        if (compare->parsed())
            return run_compare(parse_state(spec1_txt), parse_state(spec2_txt), params, schedule,
                               trace_path, format, out_path);
        if (ratio->parsed())
            return run_ratio(ratio_m, ratio_nmax, Vec2(kap[0], kap[1]), Vec2(kap_t[0], kap_t[1]),
                             params, format, out_path);
        if (geodesic->parsed()) return run_geodesic(params, format, out_path);
        if (dbl->parsed()) return run_double(dbl_m, params, format, out_path);
        if (star_cmd->parsed())
            return run_star(star_check, star_res, star_theta, star_extent, star_dump, params,
                            format, out_path);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        if (format == "json")
            std::cerr << err.dump() << "\n";
        else
            std::cerr << "error," << e.what() << "\n";
        return 2;
    }
    return 0;
}
