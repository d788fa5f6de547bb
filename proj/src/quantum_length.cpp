#include "moyal/quantum_length.hpp"

#include <cmath>
#include <cstdio>

#include "nlohmann/json.hpp"

namespace moyal {

namespace {

double energy(int m, double lambda_p) { return lambda_p * lambda_p * (m + 0.5); }

// (m, kappa) when the spec is a generalized coherent state
std::optional<std::pair<int, Vec2>> coherent_data(const StateSpec& s) {
    if (const auto* e = std::get_if<Eigenstate>(&s.v)) return {{e->m, Vec2::Zero()}};
    if (const auto* c = std::get_if<Coherent>(&s.v)) return {{c->m, c->kappa}};
    return std::nullopt;
}

int needed_dim(const StateSpec& s) {
    int n = s.min_dim();
    if (const auto* c = std::get_if<Coherent>(&s.v)) {
        // displaced states need room for the shifted Poisson tail
        double k2 = c->kappa.squaredNorm();
        n = std::max(n, c->m + 8 + static_cast<int>(std::ceil(2.0 * k2 + 8.0 * std::sqrt(k2))));
    }
    return n;
}

DistanceReport schedule_eval(const StateSpec& s1, const StateSpec& s2, const ModelParams& params,
                             int cap, double (*eval)(const StateSpec&, const StateSpec&, int, double)) {
    std::vector<int> ns = default_schedule(params, cap);
    int floor_dim = std::max(needed_dim(s1), needed_dim(s2));
    for (auto& n : ns) n = std::max(n, floor_dim);
    DistanceReport rep;
    rep.method = "operator-evaluation";
    double prev = 0.0;
    bool have_prev = false;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (i && ns[i] <= ns[i - 1]) continue;
        double v = eval(s1, s2, ns[i], params.lambda_p);
        rep.value = v;
        rep.truncation = ns[i];
        if (have_prev) {
            rep.residual = std::abs(v - prev);
            if (rep.residual < params.tol) {
                rep.converged = true;
                rep.operator_value = v;
                return rep;
            }
        }
        prev = v;
        have_prev = true;
    }
    rep.converged = ns.size() < 2;
    rep.operator_value = rep.value;
    return rep;
}

}  // namespace

std::vector<int> default_schedule(const ModelParams& params, int cap) {
    std::vector<int> ns;
    int n = std::max(4, params.truncation);
    while (true) {
        ns.push_back(std::min(n, cap));
        if (n >= cap) break;
        n *= 2;
    }
    return ns;
}

double coherent_d_L2(int m, int n, const Vec2& kappa, const Vec2& kappa_t, double lambda_p) {
    return 2.0 * energy(m, lambda_p) + 2.0 * energy(n, lambda_p) + (kappa - kappa_t).squaredNorm();
}

double sphere_d_L2(int m, int n, double z1, double z2, double lambda_p) {
    if (n <= m + 1)
        throw FormulaInapplicable("sphere d_L2 closed form needs n > m+1 (cross ladder terms)");
    double em = energy(m, lambda_p), en = energy(n, lambda_p);
    return 2.0 * (em + en) + (z1 + z2) * (em - en);
}

std::optional<double> analytic_d_L2(const StateSpec& s1, const StateSpec& s2, double lambda_p) {
    auto c1 = coherent_data(s1), c2 = coherent_data(s2);
    if (c1 && c2)
        return coherent_d_L2(c1->first, c2->first, c1->second, c2->second, lambda_p);
    const auto* sp1 = std::get_if<Sphere>(&s1.v);
    const auto* sp2 = std::get_if<Sphere>(&s2.v);
    if (sp1 && sp2 && sp1->m == sp2->m && sp1->n == sp2->n && sp1->n > sp1->m + 1)
        return sphere_d_L2(sp1->m, sp1->n, sp1->z, sp2->z, lambda_p);
    return std::nullopt;
}

DistanceReport d_L2(const StateSpec& s1, const StateSpec& s2, const ModelParams& params) {
    params.validate();
    DistanceReport rep = schedule_eval(s1, s2, params, 256, &pair_expect_length_sq);
    if (auto an = analytic_d_L2(s1, s2, params.lambda_p)) {
        rep.analytic_value = *an;
        rep.residual = std::abs(rep.value - *an);
        rep.value = *an;
        rep.method = "analytic";
    }
    return rep;
}

DistanceReport d_L(const StateSpec& s1, const StateSpec& s2, const ModelParams& params) {
    params.validate();
    // sqrt needs the sector eigensolve; keep the schedule within the tensor budget
    return schedule_eval(s1, s2, params, 128, &pair_expect_length);
}

double lambda_inv2(const StateSpec& s1, const StateSpec& s2, const ModelParams& params) {
    double a = d_L2(s1, s1, params).value;
    double b = d_L2(s2, s2, params).value;
    return std::sqrt(a * b);
}

DistanceReport d_L_mod(const StateSpec& s1, const StateSpec& s2, const ModelParams& params) {
    DistanceReport d2 = d_L2(s1, s2, params);
    double linv2 = lambda_inv2(s1, s2, params);
    double gap = d2.value - linv2;
    DistanceReport rep;
    rep.value = std::sqrt(std::abs(gap));
    rep.method = d2.method;
    rep.truncation = d2.truncation;
    rep.residual = d2.residual;
    rep.converged = d2.converged;
    rep.gap_sign = (gap > 0.0) - (gap < 0.0);
    if (d2.analytic_value) {
        // closed-form gap when both ingredients are analytic
        auto self1 = analytic_d_L2(s1, s1, params.lambda_p);
        auto self2 = analytic_d_L2(s2, s2, params.lambda_p);
        if (self1 && self2)
            rep.analytic_value = std::sqrt(std::abs(*d2.analytic_value - std::sqrt(*self1 * *self2)));
    }
    rep.operator_value = rep.value;
    return rep;
}

std::string report_csv_row(const std::string& quantity, const std::string& s1,
                           const std::string& s2, const DistanceReport& r) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.12g,%s,%d,%.12g,%d\n", quantity.c_str(),
                  quote(s1).c_str(), quote(s2).c_str(), r.value, r.method.c_str(), r.truncation,
                  r.residual, r.converged ? 1 : 0);
    return buf;
}

std::string lengths_csv_header() { return "spec1,spec2,d_L2,d_L,d_L_mod,method,truncation,residual\n"; }

std::string lengths_csv_row(const StateSpec& s1, const StateSpec& s2, const ModelParams& params) {
    DistanceReport r2 = d_L2(s1, s2, params);
    DistanceReport rl = d_L(s1, s2, params);
    DistanceReport rm = d_L_mod(s1, s2, params);
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g,%.12g,%s,%d,%.12g\n",
                  quote(s1.text()).c_str(), quote(s2.text()).c_str(), r2.value, rl.value, rm.value,
                  r2.method.c_str(), std::max(r2.truncation, rl.truncation),
                  std::max(r2.residual, rl.residual));
    return buf;
}

std::string report_json(const std::string& quantity, const std::string& s1, const std::string& s2,
                        const DistanceReport& r) {
    nlohmann::json j;
    j["quantity"] = quantity;
    j["spec1"] = s1;
    j["spec2"] = s2;
    j["value"] = r.value;
    j["method"] = r.method;
    j["truncation"] = r.truncation;
    j["residual"] = r.residual;
    j["converged"] = r.converged;
    if (r.analytic_value) j["analytic"] = *r.analytic_value;
    if (r.operator_value) j["operator"] = *r.operator_value;
    if (r.gap_sign) j["gap_sign"] = r.gap_sign;
    return j.dump();
}

}  // namespace moyal
