#include "moyal/lipschitz_solver.hpp"

#include <algorithm>
#include <cmath>

namespace moyal {

namespace {

// [A, a^+] and [A, a] as shift-and-scale maps, O(N^2)
Matrix comm_adag(const Matrix& m, double lambda_p) {
    const int n = static_cast<int>(m.rows());
    Matrix out = Matrix::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) out.col(j) += m.col(j + 1) * (lambda_p * std::sqrt(j + 1.0));
    for (int i = 1; i < n; ++i) out.row(i) -= m.row(i - 1) * (lambda_p * std::sqrt(double(i)));
    return out;
}

Matrix comm_a(const Matrix& m, double lambda_p) {
    const int n = static_cast<int>(m.rows());
    Matrix out = Matrix::Zero(n, n);
    for (int j = 1; j < n; ++j) out.col(j) += m.col(j - 1) * (lambda_p * std::sqrt(double(j)));
    for (int i = 0; i + 1 < n; ++i) out.row(i) -= m.row(i + 1) * (lambda_p * std::sqrt(i + 1.0));
    return out;
}

struct CommPair {
    Matrix m1, m2;  // interior blocks of [A,a^+] and [A,a]
};

CommPair interior_comms(const Matrix& a, double lambda_p) {
    const int n = static_cast<int>(a.rows());
    CommPair c;
    c.m1 = comm_adag(a, lambda_p).topLeftCorner(n - 1, n - 1);
    c.m2 = comm_a(a, lambda_p).topLeftCorner(n - 1, n - 1);
    return c;
}

double spec_norm(const Matrix& m) { return operator_norm(m); }

double seminorm_impl(const Matrix& a, double lambda_p) {
    CommPair c = interior_comms(a, lambda_p);
    return std::sqrt(2.0) / (lambda_p * lambda_p) * std::max(spec_norm(c.m1), spec_norm(c.m2));
}

// commutators, their norms and the seminorm at one point, reusable across the
// normalize / subgradient steps of the polish loop
struct CommEval {
    Matrix m1, m2;
    double n1 = 0.0, n2 = 0.0;
    double s = 0.0;
};

CommEval eval_comms(const Matrix& a, double lambda_p) {
    CommEval e;
    CommPair c = interior_comms(a, lambda_p);
    e.m1 = std::move(c.m1);
    e.m2 = std::move(c.m2);
    e.n1 = spec_norm(e.m1);
    e.n2 = spec_norm(e.m2);
    e.s = std::sqrt(2.0) / (lambda_p * lambda_p) * std::max(e.n1, e.n2);
    return e;
}

void rescale(CommEval& e, double factor) {
    e.m1 *= factor;
    e.m2 *= factor;
    e.n1 *= factor;
    e.n2 *= factor;
    e.s *= factor;
}

// subgradient of the seminorm from the active commutator's top singular pair
Matrix seminorm_subgrad(const CommEval& e, int n, double lambda_p) {
    const Matrix& m = (e.n1 >= e.n2) ? e.m1 : e.m2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
    CVector u = CVector::Zero(n), v = CVector::Zero(n);
    v.head(n - 1) = es.eigenvectors().col(n - 2);
    CVector mv = m * v.head(n - 1);
    if (mv.norm() < 1e-300) return Matrix::Zero(n, n);
    u.head(n - 1) = mv / mv.norm();
    Matrix k = v * u.adjoint();
    // d||[A,a^+]|| = Re tr((a^+ v u^* - v u^* a^+) dA)  ->  W = -[k, a^+] with k = v u^*
    Matrix w = (e.n1 >= e.n2) ? Matrix(-comm_adag(k, lambda_p)) : Matrix(-comm_a(k, lambda_p));
    Matrix g = (w + w.adjoint()) / 2.0;
    return std::sqrt(2.0) / (lambda_p * lambda_p) * g;
}

// smoothed Schatten-p softmax over both commutators: value and gradient
std::pair<double, Matrix> smooth_norm_grad(const Matrix& a, double lambda_p, double p) {
    const int n = static_cast<int>(a.rows());
    const double c = std::sqrt(2.0) / (lambda_p * lambda_p);
    CommPair cp = interior_comms(a, lambda_p);
    Eigen::BDCSVD<Matrix> s1(cp.m1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::BDCSVD<Matrix> s2(cp.m2, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = std::max(s1.singularValues()(0), s2.singularValues()(0));
    if (smax <= 0.0) return {0.0, Matrix::Zero(n, n)};
    double t = 0.0;
    for (int i = 0; i < s1.singularValues().size(); ++i)
        t += std::pow(s1.singularValues()(i) / smax, p);
    for (int i = 0; i < s2.singularValues().size(); ++i)
        t += std::pow(s2.singularValues()(i) / smax, p);
    double sp = c * smax * std::pow(t, 1.0 / p);
    Matrix g = Matrix::Zero(n, n);
    auto add = [&](const Eigen::BDCSVD<Matrix>& svd, bool first) {
        Eigen::VectorXd w(svd.singularValues().size());
        for (int i = 0; i < w.size(); ++i) w(i) = std::pow(svd.singularValues()(i) / smax, p - 1.0);
        Matrix ksmall = svd.matrixV() * w.asDiagonal() * svd.matrixU().adjoint();
        Matrix k = Matrix::Zero(n, n);
        k.topLeftCorner(n - 1, n - 1) = ksmall;
        Matrix wfull = first ? Matrix(-comm_adag(k, lambda_p)) : Matrix(-comm_a(k, lambda_p));
        g += (wfull + wfull.adjoint()) / 2.0;
    };
    add(s1, true);
    add(s2, false);
    g *= c * std::pow(t, 1.0 / p - 1.0);
    return {sp, g};
}

double objective(const Matrix& delta, const Matrix& a) {
    return std::real((delta.adjoint() * a).trace());
}

// value = <delta, A>/s(A); ascent over the smoothed surrogate with p continuation,
// then a normalized-subgradient polish with geometrically decaying steps.
double ratio_ascent(const Matrix& delta, double lambda_p, const SolverConfig& cfg,
                    std::vector<double>* history) {
    const int n = static_cast<int>(delta.rows());
    auto ratio = [&](const Matrix& a) {
        double s = seminorm_impl(a, lambda_p);
        return s > 0.0 ? objective(delta, a) / s : 0.0;
    };

    // Two starts: the state difference itself (organized by the smoothing ladder), and the
    // best coordinate direction, which is already optimal for pure translate pairs and only
    // needs polishing.  The smoothing softmax inflates fully degenerate commutators, so it
    // must not touch the coordinate start.
    std::vector<std::pair<Matrix, bool>> inits;
    Matrix d_herm = (delta + delta.adjoint()) / 2.0;
    if (d_herm.norm() > 1e-300) inits.push_back({d_herm, true});
    {
        auto [q1, q2] = position_ops(n, lambda_p);
        double w1 = std::real((delta.adjoint() * q1.entries).trace());
        double w2 = std::real((delta.adjoint() * q2.entries).trace());
        double wn = std::hypot(w1, w2);
        if (wn > 1e-14)
            inits.push_back({((w1 * q1.entries + w2 * q2.entries) / wn).eval(), false});
    }
    if (inits.empty()) return 0.0;

    double best = 0.0;
    bool have_best = false;
    for (const auto& [init, smooth] : inits) {
        Matrix a = init / seminorm_impl(init, lambda_p);
        // smoothing stages
        for (double p : smooth ? std::vector<double>{8, 32, 128, 512} : std::vector<double>{}) {
            double eta = cfg.step0;
            auto [sp, gs] = smooth_norm_grad(a, lambda_p, p);
            double val = objective(delta, a);
            double fs = val / sp;
            for (int it = 0; it < cfg.smooth_iters; ++it) {
                Matrix grad = d_herm / sp - (val / (sp * sp)) * gs;
                double gn = grad.norm();
                if (gn < 1e-15) break;
                Matrix a2 = a + (eta / gn) * grad;
                auto [sp2, gs2] = smooth_norm_grad(a2, lambda_p, p);
                double val2 = objective(delta, a2);
                if (val2 / sp2 > fs) {
                    a = std::move(a2);
                    sp = sp2;
                    gs = std::move(gs2);
                    val = val2;
                    fs = val / sp;
                    eta *= 1.1;
                } else {
                    eta *= 0.5;
                    if (eta < 1e-14) break;
                }
            }
        }
        // sharp polish with geometrically decaying normalized subgradient steps
        CommEval ce = eval_comms(a, lambda_p);
        Matrix cur = a / ce.s;
        rescale(ce, 1.0 / ce.s);
        Matrix ab = cur;
        double fb = objective(delta, cur);
        double eta = 1e-3;
        int stall = 0;
        for (int it = 0; it < cfg.max_iters; ++it) {
            double fc = objective(delta, cur);  // cur sits on the seminorm unit sphere
            if (history) history->push_back(fc);
            if (fc > fb + 1e-16) {
                fb = fc;
                ab = cur;
                stall = 0;
            } else if (++stall > 40) {
                eta *= 0.5;
                stall = 0;
                if (eta < 1e-13) break;
                cur = ab;
                ce = eval_comms(cur, lambda_p);
                continue;
            }
            Matrix grad = d_herm - fc * seminorm_subgrad(ce, n, lambda_p);
            double gn = grad.norm();
            if (gn < 1e-16) break;
            cur += (eta / gn) * grad;
            ce = eval_comms(cur, lambda_p);
            cur /= ce.s;
            rescale(ce, 1.0 / ce.s);
        }
        double exact = ratio(ab);
        if (!have_best || exact > best) {
            best = exact;
            have_best = true;
        }
    }
    return best;
}

// chain LP over real diagonals: exact greedy, gap k saturated toward the heavier tail
double diagonal_lp(const CVector& psi1, const CVector& psi2, double lambda_p) {
    const int n = static_cast<int>(psi1.size());
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) c[k] = std::norm(psi1(k)) - std::norm(psi2(k));
    double value = 0.0, tail = 0.0;
    for (int k = n - 1; k >= 1; --k) {
        tail += c[k];
        value += std::abs(tail) * (lambda_p / std::sqrt(2.0)) / std::sqrt(double(k));
    }
    return value;
}

bool is_basis_state(const StateSpec& s) {
    if (std::get_if<Eigenstate>(&s.v)) return true;
    if (const auto* c = std::get_if<Coherent>(&s.v)) return c->kappa.norm() == 0.0;
    if (const auto* sp = std::get_if<Sphere>(&s.v)) return std::abs(sp->z) == 1.0;
    if (const auto* w = std::get_if<VectorState>(&s.v)) {
        int nz = 0;
        for (const auto& cc : w->coeffs)
            if (std::abs(cc) != 0.0) ++nz;
        return nz == 1;
    }
    return false;
}

int solver_floor_dim(const StateSpec& s) {
    int n = s.min_dim() + 2;
    if (const auto* c = std::get_if<Coherent>(&s.v)) {
        double k2 = c->kappa.squaredNorm();
        n = std::max(n, c->m + 8 + static_cast<int>(std::ceil(2.0 * k2 + 8.0 * std::sqrt(k2))));
    }
    return n;
}

}  // namespace

void SolverConfig::validate() const {
    if (tol <= 0.0) throw std::invalid_argument("solver tol must be positive");
    if (max_iters < 1 || smooth_iters < 0) throw std::invalid_argument("bad iteration caps");
    for (size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("schedule must be strictly increasing");
}

double seminorm(const TruncatedOperator& op) {
    if (!op.is_hermitian(1e-10)) throw std::invalid_argument("seminorm: input is not Hermitian");
    return seminorm_impl(op.entries, op.lambda_p);
}

DistanceReport solve_distance(const StateSpec& s1, const StateSpec& s2, const SolverConfig& config,
                              double lambda_p, SolverTrace* trace) {
    config.validate();
    std::vector<int> ns = config.schedule.empty() ? std::vector<int>{24, 32} : config.schedule;
    int floor_dim = std::max(solver_floor_dim(s1), solver_floor_dim(s2));
    for (auto& n : ns) n = std::max(n, floor_dim);

    bool diag = (config.method == SolverMethod::DiagonalLP) ||
                (config.method == SolverMethod::Auto && is_basis_state(s1) && is_basis_state(s2));

    DistanceReport rep;
    rep.method = "solver";
    double prev = 0.0;
    bool have_prev = false, converged = false;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (i && ns[i] <= ns[i - 1]) continue;
        int n = ns[i];
        CVector p1 = realize(s1, n, lambda_p);
        CVector p2 = realize(s2, n, lambda_p);
        double v;
        if (diag) {
            v = diagonal_lp(p1, p2, lambda_p);
        } else {
            Matrix delta = p1 * p1.adjoint() - p2 * p2.adjoint();
            std::vector<double>* hist = (trace && i + 1 == ns.size()) ? &trace->objective : nullptr;
            v = ratio_ascent(delta, lambda_p, config, hist);
        }
        if (trace) trace->per_truncation.emplace_back(n, v);
        rep.value = v;
        rep.truncation = n;
        if (have_prev) {
            rep.residual = std::abs(v - prev);
            if (rep.residual < config.tol) converged = true;
        }
        prev = v;
        have_prev = true;
    }
    rep.converged = converged || ns.size() < 2;
    rep.operator_value = rep.value;
    return rep;
}

TruncatedOperator optimal_element_l0(int n, double lambda_p) {
    if (n < 2) throw std::invalid_argument("optimal_element_l0: truncation must be >= 2");
    Matrix m = Matrix::Zero(n, n);
    double acc = 0.0;
    for (int k = 1; k < n; ++k) {
        acc += 1.0 / std::sqrt(double(k));
        m(k, k) = lambda_p / std::sqrt(2.0) * acc;
    }
    return {m, lambda_p};
}

std::tuple<TruncatedOperator, TruncatedOperator, TruncatedOperator> candidate_elements(
    int n, double lambda_p) {
    auto [a, ad] = ladder(n, lambda_p);
    const double t = lambda_p * lambda_p;
    TruncatedOperator zz{a.entries * ad.entries, lambda_p};   // a a^+
    TruncatedOperator zbz{ad.entries * a.entries, lambda_p};  // a^+ a
    auto root = [](double x) { return std::sqrt(std::max(0.0, x)); };
    TruncatedOperator l1 = hermitian_function({zz.entries + zbz.entries, lambda_p}, root);
    TruncatedOperator l2 = hermitian_function({2.0 * (zz.entries - t * Matrix::Identity(n, n)), lambda_p}, root);
    TruncatedOperator l3 = hermitian_function({2.0 * (zbz.entries + t * Matrix::Identity(n, n)), lambda_p}, root);
    return {l1, l2, l3};
}

double geodesic_residual(const TruncatedOperator& op) {
    if (!op.is_hermitian(1e-10))
        throw std::invalid_argument("geodesic_residual: input is not Hermitian");
    const int n = op.dim();
    const double t = op.lambda_p * op.lambda_p;
    auto [a, ad] = ladder(n, op.lambda_p);
    Matrix m = deriv_z(op).entries;
    Matrix x = m * (a.entries * ad.entries) * m.adjoint();
    Matrix y = 0.5 * (ad.entries * a.entries);
    int cut = n - 2;  // products touch the last ladder entries
    double worst = 0.0;
    for (int i = 0; i < cut; ++i)
        for (int j = 0; j < cut; ++j) {
            double scale = std::max(std::abs(y(i, j)), 0.5 * t);
            worst = std::max(worst, std::abs(x(i, j) - y(i, j)) / scale);
        }
    return worst;
}

RiemannComparison riemann_comparison(int m, int n, double lambda_p) {
    if (m >= n) throw std::invalid_argument("riemann_comparison: needs m < n");
    RiemannComparison out;
    for (int k = m + 1; k <= n; ++k) out.sum += 1.0 / std::sqrt(2.0 * k);
    out.sum *= lambda_p;
    out.integral = lambda_p * (std::sqrt(2.0 * n + 1.0) - std::sqrt(2.0 * m + 1.0));
    out.ratio = out.sum / out.integral;
    return out;
}

}  // namespace moyal
