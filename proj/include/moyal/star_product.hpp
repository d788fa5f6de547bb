#ifndef MOYAL_STAR_PRODUCT_HPP
#define MOYAL_STAR_PRODUCT_HPP

#include "moyal/core_ops.hpp"

#include <functional>
#include <string>
#include <vector>

namespace moyal {

/// Complex function sampled on the square [-extent, extent)^2, x_j = -extent + j h,
/// h = 2 extent / resolution.  Row index is x1, column index is x2.
struct GridFunction {
    double extent = 0.0;
    int resolution = 0;     // points per axis, power of two, >= 64
    double theta = 1.0;     // deformation parameter lambda_p^2
    Matrix samples;

    GridFunction() = default;
    GridFunction(double ext, int res, double th);
    double spacing() const { return 2.0 * extent / resolution; }
    double coord(int j) const { return -extent + spacing() * j; }
};

GridFunction sample_grid(double extent, int resolution, double theta,
                         const std::function<Complex(double, double)>& f);

/// Ground Wigner projector 2 exp(-|x|^2/theta): g0 * g0 = g0.
GridFunction gaussian_ground(double extent, int resolution, double theta);

/// Moyal product through the Fourier-space twisted convolution, evaluated by
/// phase-multiplied partial transforms; spectral accuracy for band-limited inputs.
GridFunction star(const GridFunction& f, const GridFunction& g);

/// ||star_theta(f,g) - f g||_inf on the interior window per decreasing theta.
std::vector<double> commutative_limit(const GridFunction& f, const GridFunction& g,
                                      const std::vector<double>& thetas);

/// ||(f*g)*h - f*(g*h)||_inf on the interior window.
double associativity_check(const GridFunction& f, const GridFunction& g, const GridFunction& h);

/// Max modulus over the central `frac` portion of the domain (periodization error
/// concentrates at the boundary).
double window_norm(const Matrix& samples, double frac = 0.6);

/// Trapezoid integral of the samples over the full grid.
Complex grid_integral(const GridFunction& f);

void write_grid_csv(const GridFunction& f, const std::string& path);
GridFunction read_grid_csv(const std::string& path);
void write_grid_binary(const GridFunction& f, const std::string& path);
GridFunction read_grid_binary(const std::string& path);

}  // namespace moyal

#endif
