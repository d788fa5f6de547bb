#include "moyal/states.hpp"
#include "moyal/tensor_space.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace moyal {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

double to_double(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number in state spec: '" + s + "'");
    return v;
}

int to_index(const std::string& s) {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument("bad index in state spec: '" + s + "'");
    return v;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void StateSpec::check() const {
    if (const auto* s = std::get_if<Sphere>(&v)) {
        if (s->m < 0 || s->n <= s->m) throw std::invalid_argument("sphere state needs n > m >= 0");
        double r = s->x * s->x + s->y * s->y + s->z * s->z;
        if (std::abs(r - 1.0) > 1e-12)
            throw std::invalid_argument("sphere state needs x^2+y^2+z^2 = 1");
    } else if (const auto* w = std::get_if<VectorState>(&v)) {
        if (w->coeffs.empty()) throw std::invalid_argument("vector state needs coefficients");
        double n2 = 0;
        for (const auto& c : w->coeffs) n2 += std::norm(c);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
            throw std::invalid_argument("vector state must be unit norm");
    } else if (const auto* e = std::get_if<Eigenstate>(&v)) {
        if (e->m < 0) throw std::invalid_argument("eigenstate index must be >= 0");
    } else if (const auto* c = std::get_if<Coherent>(&v)) {
        if (c->m < 0) throw std::invalid_argument("coherent base index must be >= 0");
    }
}

int StateSpec::min_dim() const {
    if (const auto* e = std::get_if<Eigenstate>(&v)) return e->m + 1;
    if (const auto* c = std::get_if<Coherent>(&v)) return c->m + 1;
    if (const auto* s = std::get_if<Sphere>(&v)) return s->n + 1;
    return static_cast<int>(std::get<VectorState>(v).coeffs.size());
}

std::string StateSpec::text() const {
    if (const auto* e = std::get_if<Eigenstate>(&v)) return "eig:" + std::to_string(e->m);
    if (const auto* c = std::get_if<Coherent>(&v))
        return "coh:" + std::to_string(c->m) + ":" + fmt(c->kappa(0)) + "," + fmt(c->kappa(1));
    if (const auto* s = std::get_if<Sphere>(&v))
        return "sph:" + std::to_string(s->m) + "," + std::to_string(s->n) + ":" + fmt(s->x) + "," +
               fmt(s->y) + "," + fmt(s->z);
    const auto& w = std::get<VectorState>(v);
    std::string out = "vec:";
    for (size_t i = 0; i < w.coeffs.size(); ++i) {
        if (i) out += ",";
        out += fmt(w.coeffs[i].real());
        if (w.coeffs[i].imag() != 0.0) out += (w.coeffs[i].imag() > 0 ? "+" : "") + fmt(w.coeffs[i].imag()) + "i";
    }
    return out;
}

StateSpec parse_state(const std::string& text) {
    auto head = text.find(':');
    if (head == std::string::npos) throw std::invalid_argument("bad state spec: '" + text + "'");
    std::string kind = text.substr(0, head);
    std::string rest = text.substr(head + 1);
    if (kind == "eig") return StateSpec(Eigenstate{to_index(rest)});
    if (kind == "coh") {
        auto mid = rest.find(':');
        if (mid == std::string::npos) throw std::invalid_argument("coh spec needs coh:m:k1,k2");
        int m = to_index(rest.substr(0, mid));
        auto ks = split(rest.substr(mid + 1), ',');
        if (ks.size() != 2) throw std::invalid_argument("coh spec needs two kappa components");
        return StateSpec(Coherent{m, Vec2(to_double(ks[0]), to_double(ks[1]))});
    }
    if (kind == "sph") {
        auto mid = rest.find(':');
        if (mid == std::string::npos) throw std::invalid_argument("sph spec needs sph:m,n:x,y,z");
        auto mn = split(rest.substr(0, mid), ',');
        auto xyz = split(rest.substr(mid + 1), ',');
        if (mn.size() != 2 || xyz.size() != 3)
            throw std::invalid_argument("sph spec needs sph:m,n:x,y,z");
        return StateSpec(Sphere{to_index(mn[0]), to_index(mn[1]), to_double(xyz[0]),
                                to_double(xyz[1]), to_double(xyz[2])});
    }
    if (kind == "vec") {
        auto parts = split(rest, ',');
        VectorState w;
        for (auto& p : parts) {
            // accept "a", "a+bi", "a-bi", "bi"
            double re = 0, im = 0;
            std::string t = p;
            auto ipos = t.find('i');
            if (ipos == std::string::npos) {
                re = to_double(t);
            } else {
                t.erase(ipos, 1);
                auto sgn = t.find_last_of("+-");
                if (sgn == std::string::npos || sgn == 0) {
                    im = to_double(t);
                } else {
                    re = to_double(t.substr(0, sgn));
                    im = to_double(t.substr(sgn));
                }
            }
            w.coeffs.emplace_back(re, im);
        }
        return StateSpec(std::move(w));
    }
    throw std::invalid_argument("unknown state kind '" + kind + "'");
}

CVector realize(const StateSpec& spec, int n, double lambda_p, double tol) {
    if (spec.min_dim() > n)
        throw TruncationError("state " + spec.text() + " not realizable at truncation " +
                              std::to_string(n));
    CVector psi = CVector::Zero(n);
    if (const auto* e = std::get_if<Eigenstate>(&spec.v)) {
        psi(e->m) = 1.0;
    } else if (const auto* c = std::get_if<Coherent>(&spec.v)) {
        TruncatedOperator u = displacement(c->kappa, n, lambda_p, tol);
        psi(c->m) = 1.0;
        psi = u.entries * psi;
    } else if (const auto* s = std::get_if<Sphere>(&spec.v)) {
        double phi = (s->x == 0.0 && s->y == 0.0) ? 0.0 : std::atan2(s->y, s->x);
        psi(s->m) = std::sqrt((1.0 + s->z) / 2.0);
        psi(s->n) = std::sqrt((1.0 - s->z) / 2.0) * std::exp(Complex(0.0, phi));
    } else {
        const auto& w = std::get<VectorState>(spec.v);
        for (size_t i = 0; i < w.coeffs.size(); ++i) psi(i) = w.coeffs[i];
    }
    psi /= psi.norm();
    return psi;
}

Complex evaluate(const StateSpec& spec, const TruncatedOperator& op) {
    CVector psi = realize(spec, op.dim(), op.lambda_p);
    return psi.dot(op.entries * psi);
}

Complex evaluate_pair(const StateSpec& s1, const StateSpec& s2, const TwoPointOperator& b) {
    int n = b.base_dim;
    CVector p1 = realize(s1, n, b.lambda_p);
    CVector p2 = realize(s2, n, b.lambda_p);
    CVector prod(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prod(i * n + j) = p1(i) * p2(j);
    return prod.dot(b.entries * prod);
}

SphereCoords sphere_coords(const StateSpec& spec) {
    const auto* w = std::get_if<VectorState>(&spec.v);
    if (!w) throw std::invalid_argument("sphere_coords expects a vector state");
    int m = -1, n = -1;
    for (size_t i = 0; i < w->coeffs.size(); ++i) {
        if (std::abs(w->coeffs[i]) == 0.0) continue;
        if (m < 0)
            m = static_cast<int>(i);
        else if (n < 0)
            n = static_cast<int>(i);
        else
            throw std::invalid_argument("sphere_coords: more than two nonzero components");
    }
    if (m < 0 || n < 0)
        throw std::invalid_argument("sphere_coords: needs exactly two nonzero components");
    Complex cm = w->coeffs[m], cn = w->coeffs[n];
    return {m, n, 2.0 * std::real(std::conj(cm) * cn), 2.0 * std::imag(std::conj(cm) * cn),
            std::norm(cm) - std::norm(cn)};
}

}  // namespace moyal
