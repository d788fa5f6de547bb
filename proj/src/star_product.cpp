#include "moyal/star_product.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>

namespace moyal {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// signed fft-order index: 0,1,..,R/2-1,-R/2,..,-1
int signed_index(int m, int r) { return (m < r / 2) ? m : m - r; }

// fftw planning is not thread safe; execution is
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// batched 1D FFT along one axis of a column-major matrix, in place, unnormalized
void fft_axis(Matrix& m, int axis, int sign) {
    const int r = static_cast<int>(m.rows());
    auto* data = reinterpret_cast<fftw_complex*>(m.data());
    int n[1] = {r};
    int istride, idist;
    if (axis == 0) {  // transform each column
        istride = 1;
        idist = r;
    } else {  // transform each row
        istride = r;
        idist = 1;
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_many_dft(1, n, r, data, nullptr, istride, idist, data, nullptr, istride,
                                  idist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

GridFunction::GridFunction(double ext, int res, double th) : extent(ext), resolution(res), theta(th) {
    if (extent <= 0.0) throw std::invalid_argument("grid extent must be positive");
    if (resolution < 64 || !power_of_two(resolution))
        throw std::invalid_argument("grid resolution must be a power of two >= 64");
    if (theta <= 0.0) throw std::invalid_argument("theta must be positive");
    samples = Matrix::Zero(resolution, resolution);
}

GridFunction sample_grid(double extent, int resolution, double theta,
                         const std::function<Complex(double, double)>& f) {
    GridFunction g(extent, resolution, theta);
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) g.samples(i, j) = f(g.coord(i), g.coord(j));
    return g;
}

GridFunction gaussian_ground(double extent, int resolution, double theta) {
    return sample_grid(extent, resolution, theta, [theta](double x1, double x2) {
        return Complex(2.0 * std::exp(-(x1 * x1 + x2 * x2) / theta), 0.0);
    });
}

GridFunction star(const GridFunction& f, const GridFunction& g) {
    if (f.resolution != g.resolution || f.extent != g.extent || f.theta != g.theta)
        throw std::domain_error("star: grids must match in extent, resolution and theta");
    const int r = f.resolution;
    const double x0 = f.extent;
    const double h = f.spacing();
    const double theta = f.theta;
    const double dk = M_PI / x0;

    Eigen::VectorXd k(r);
    Eigen::VectorXcd parity(r);
    for (int m = 0; m < r; ++m) {
        int s = signed_index(m, r);
        k(m) = dk * s;
        parity(m) = (s % 2 == 0) ? 1.0 : -1.0;  // e^{i k X} at the grid offset
    }

    // continuum transforms along axis 0 (f) resp. axis 1 is taken later per factor
    auto ft2 = [&](const Matrix& in) {
        Matrix m = in;
        fft_axis(m, 0, FFTW_FORWARD);
        fft_axis(m, 1, FFTW_FORWARD);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) m(i, j) *= h * h * parity(i) * parity(j);
        return m;
    };
    // (1/2pi) int dk e^{ikx}, along the requested axis
    auto ifft_cont = [&](Matrix m, int axis) {
        if (axis == 1)
            for (int j = 0; j < r; ++j) m.col(j) *= parity(j);
        else
            for (int i = 0; i < r; ++i) m.row(i) *= parity(i);
        fft_axis(m, axis, FFTW_BACKWARD);
        m /= double(r) * h;
        return m;
    };

    Matrix ff = ft2(f.samples);  // (p1, k2)
    Matrix gg = ft2(g.samples);  // (q1, k2)

    // e^{-i(theta/2) k_p k_q}; the twisted-convolution phase in mixed representation
    Matrix twist(r, r);
    for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) twist(p, q) = std::polar(1.0, -0.5 * theta * k(p) * k(q));
    // e^{i k_q x_i}
    Matrix wave(r, r);
    for (int q = 0; q < r; ++q)
        for (int i = 0; i < r; ++i) wave(q, i) = std::polar(1.0, k(q) * (-x0 + h * i));

    Matrix out = Matrix::Zero(r, r);
    Matrix shifted_f(r, r), grow(r, r);
    for (int iq = 0; iq < r; ++iq) {
        // f1(p1, x2 + (theta/2) q1): inverse transform with the shift phase on k2
        for (int j = 0; j < r; ++j) shifted_f.col(j) = ff.col(j) * std::conj(twist(iq, j));
        shifted_f = ifft_cont(std::move(shifted_f), 1);
        // g1(q1, x2 - (theta/2) p1) for all p1 at once
        for (int p = 0; p < r; ++p) grow.row(p) = gg.row(iq).cwiseProduct(twist.row(p));
        grow = ifft_cont(std::move(grow), 1);
        Matrix w = shifted_f.cwiseProduct(grow);       // (p1, x2)
        w = ifft_cont(std::move(w), 0);                 // (x1, x2)
        double scale = dk / (2.0 * M_PI);
        for (int i = 0; i < r; ++i) out.row(i) += scale * wave(iq, i) * w.row(i);
    }

    GridFunction res(f.extent, r, theta);
    res.samples = std::move(out);
    return res;
}

std::vector<double> commutative_limit(const GridFunction& f, const GridFunction& g,
                                      const std::vector<double>& thetas) {
    for (size_t i = 1; i < thetas.size(); ++i)
        if (!(thetas[i] > 0.0) || thetas[i] >= thetas[i - 1])
            throw std::invalid_argument("commutative_limit: thetas must decrease and stay positive");
    std::vector<double> out;
    Matrix pointwise = f.samples.cwiseProduct(g.samples);
    for (double th : thetas) {
        GridFunction ft = f, gt = g;
        ft.theta = gt.theta = th;
        out.push_back(window_norm(star(ft, gt).samples - pointwise));
    }
    return out;
}

double associativity_check(const GridFunction& f, const GridFunction& g, const GridFunction& h) {
    GridFunction lhs = star(star(f, g), h);
    GridFunction rhs = star(f, star(g, h));
    return window_norm(lhs.samples - rhs.samples);
}

double window_norm(const Matrix& samples, double frac) {
    const int r = static_cast<int>(samples.rows());
    int lo = static_cast<int>(std::floor(r * (0.5 - frac / 2.0)));
    int hi = static_cast<int>(std::ceil(r * (0.5 + frac / 2.0)));
    lo = std::max(lo, 0);
    hi = std::min(hi, r);
    return samples.block(lo, lo, hi - lo, hi - lo).cwiseAbs().maxCoeff();
}

Complex grid_integral(const GridFunction& f) {
    return f.samples.sum() * f.spacing() * f.spacing();
}

void write_grid_csv(const GridFunction& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    char buf[160];
    std::snprintf(buf, sizeof buf, "# extent=%.17g resolution=%d theta=%.17g\n", f.extent,
                  f.resolution, f.theta);
    os << buf << "x1,x2,re,im\n";
    for (int i = 0; i < f.resolution; ++i)
        for (int j = 0; j < f.resolution; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.17g,%.17g\n", f.coord(i), f.coord(j),
                          f.samples(i, j).real(), f.samples(i, j).imag());
            os << buf;
        }
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# extent=", 0) != 0)
        throw std::runtime_error("grid csv missing header line: " + path);
    double ext = 0, th = 0;
    int res = 0;
    if (std::sscanf(line.c_str(), "# extent=%lf resolution=%d theta=%lf", &ext, &res, &th) != 3)
        throw std::runtime_error("bad grid csv header: " + line);
    std::getline(is, line);  // column names
    GridFunction g(ext, res, th);
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j) {
            if (!std::getline(is, line)) throw std::runtime_error("truncated grid csv " + path);
            double x1, x2, re, im;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x1, &x2, &re, &im) != 4)
                throw std::runtime_error("bad grid csv row: " + line);
            g.samples(i, j) = Complex(re, im);
        }
    return g;
}

void write_grid_binary(const GridFunction& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    double ext = f.extent, th = f.theta;
    std::uint32_t res = static_cast<std::uint32_t>(f.resolution);
    os.write(reinterpret_cast<const char*>(&ext), sizeof ext);
    os.write(reinterpret_cast<const char*>(&res), sizeof res);
    os.write(reinterpret_cast<const char*>(&th), sizeof th);
    for (int i = 0; i < f.resolution; ++i)
        for (int j = 0; j < f.resolution; ++j) {
            float re = static_cast<float>(f.samples(i, j).real());
            float im = static_cast<float>(f.samples(i, j).imag());
            os.write(reinterpret_cast<const char*>(&re), sizeof re);
            os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

GridFunction read_grid_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    double ext = 0, th = 0;
    std::uint32_t res = 0;
    is.read(reinterpret_cast<char*>(&ext), sizeof ext);
    is.read(reinterpret_cast<char*>(&res), sizeof res);
    is.read(reinterpret_cast<char*>(&th), sizeof th);
    if (!is) throw std::runtime_error("truncated grid file " + path);
    GridFunction g(ext, static_cast<int>(res), th);
    for (int i = 0; i < g.resolution; ++i)
        for (int j = 0; j < g.resolution; ++j) {
            float re = 0, im = 0;
            is.read(reinterpret_cast<char*>(&re), sizeof re);
            is.read(reinterpret_cast<char*>(&im), sizeof im);
            g.samples(i, j) = Complex(re, im);
        }
    if (!is) throw std::runtime_error("truncated grid file " + path);
    return g;
}

}  // namespace moyal
