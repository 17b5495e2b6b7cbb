#include "dsm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "dsm/errors.hpp"
#include "dsm/specfun.hpp"

namespace dsm {
namespace {

void check_exponent(int p) {
    if (p < 1) {
        throw ConfigError("imaging exponent p must be a positive integer, got " +
                          std::to_string(p));
    }
}

std::vector<int> incident_subset(int m, int n) {
    if (n < 0 || n > m) {
        throw ConfigError("number of incident directions must lie in [1, " + std::to_string(m) +
                          "], got " + std::to_string(n));
    }
    if (n == 0) {
        n = m;
    }
    std::vector<int> cols(n);
    for (int l = 0; l < n; ++l) {
        cols[l] = static_cast<int>((static_cast<long long>(l) * m) / n);
    }
    return cols;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

} // namespace

std::string_view to_string(FunctionalKind kind) {
    return kind == FunctionalKind::farfield ? "ff" : "rg";
}

FunctionalKind functional_kind_from_string(std::string_view name) {
    if (name == "ff" || name == "farfield") {
        return FunctionalKind::farfield;
    }
    if (name == "rg" || name == "reciprocity-gap") {
        return FunctionalKind::reciprocity_gap;
    }
    throw ConfigError("unknown imaging functional '" + std::string(name) + "' (use ff or rg)");
}

CVector probe(const DirectionSet& dirs, double k, const Vec2& z) {
    CVector v(dirs.size());
    for (int i = 0; i < dirs.size(); ++i) {
        v(i) = std::polar(1.0, -k * dirs.direction(i).dot(z));
    }
    return v;
}

double w_farfield(const FarFieldMatrix& data, const Vec2& z, int p) {
    check_exponent(p);
    if (data.values.rows() != data.values.cols()) {
        throw ConfigError("far-field matrix must be square");
    }
    const CVector phi = probe(data.directions(), data.k, z);
    const cplx form = phi.dot(data.values * phi); // Eigen's dot conjugates the left side
    return std::pow(std::abs(form), p);
}

double w_reciprocity_gap(const CauchyDataSet& data, const Vec2& z, int p, int incidents) {
    check_exponent(p);
    const int m = static_cast<int>(data.us.rows());
    if (data.us.rows() != data.dus.rows() || data.us.cols() != data.dus.cols() ||
        data.us.cols() != m) {
        throw ConfigError("Cauchy matrices must be square and of equal shape");
    }
    const double k = data.k;
    const double r0 = data.radius;
    const DirectionSet dirs(m);
    Eigen::VectorXd j0(m), dj0(m);
    for (int i = 0; i < m; ++i) {
        const Vec2 x = r0 * dirs.direction(i);
        const double t = (x - z).norm();
        const auto b = specfun::bessel_j01(k * t);
        j0(i) = b.j0;
        // J_1(k t) -> 0 while the geometric factor stays bounded.
        dj0(i) = t < 1e-12 ? 0.0 : -k * b.j1 * (r0 * r0 - x.dot(z)) / (r0 * t);
    }
    const std::vector<int> cols = incident_subset(m, incidents);
    const double weight = 2.0 * pi / static_cast<double>(cols.size());
    double sum = 0.0;
    for (const int j : cols) {
        const cplx gap = data.us.col(j).cwiseProduct(dj0.cast<cplx>()).sum() -
                         data.dus.col(j).cwiseProduct(j0.cast<cplx>()).sum();
        sum += weight * std::pow(std::abs(gap), p);
    }
    return sum;
}

FunkHecke funk_hecke_check(double k, const Vec2& x, const Vec2& z, int points) {
    if (points < 16) {
        throw ConfigError("Funk-Hecke check needs at least 16 quadrature points");
    }
    const Vec2 d = x - z;
    cplx sum = 0.0;
    for (int q = 0; q < points; ++q) {
        const double t = 2.0 * pi * q / points;
        sum += std::polar(1.0, k * (std::cos(t) * d.x() + std::sin(t) * d.y()));
    }
    return {sum * (2.0 * pi / points), 2.0 * pi * specfun::bessel_j01(k * d.norm()).j0};
}

double ImagingMap::max() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

ImagingMap sweep(const FarFieldMatrix& data, const SamplingGrid& grid, int p) {
    check_exponent(p);
    ImagingMap map{grid, std::vector<double>(grid.size()), p, FunctionalKind::farfield, false};
    for (int idx = 0; idx < grid.size(); ++idx) {
        map.values[idx] = w_farfield(data, grid.point(idx), p);
    }
    return map;
}

ImagingMap sweep(const CauchyDataSet& data, const SamplingGrid& grid, int p, int incidents) {
    check_exponent(p);
    ImagingMap map{grid, std::vector<double>(grid.size()), p, FunctionalKind::reciprocity_gap,
                   false};
    for (int idx = 0; idx < grid.size(); ++idx) {
        map.values[idx] = w_reciprocity_gap(data, grid.point(idx), p, incidents);
    }
    return map;
}

ImagingMap normalize(ImagingMap map) {
    const double top = map.max();
    if (top > 0.0) {
        for (double& v : map.values) {
            v /= top;
        }
    }
    map.normalized = true;
    return map;
}

MapSummary summarize(const ImagingMap& map) {
    if (map.values.empty()) {
        throw ConfigError("cannot summarise an empty map");
    }
    MapSummary s;
    const auto top = std::max_element(map.values.begin(), map.values.end());
    s.max = *top;
    s.argmax = map.grid.point(static_cast<int>(top - map.values.begin()));
    s.half_centroid = Vec2::Zero();
    s.half_min = Vec2::Constant(std::numeric_limits<double>::infinity());
    s.half_max = -s.half_min;
    for (int idx = 0; idx < map.grid.size(); ++idx) {
        if (map.values[idx] >= 0.5 * s.max) {
            const Vec2 z = map.grid.point(idx);
            s.half_centroid += z;
            s.half_min = s.half_min.cwiseMin(z);
            s.half_max = s.half_max.cwiseMax(z);
            ++s.half_count;
        }
    }
    s.half_centroid /= s.half_count;
    return s;
}

DecayFit envelope_slope(const ImagingMap& map, const BoundaryCurve& scatterer, double dist_min,
                        double dist_max, double bin_width) {
    if (!(bin_width > 0.0) || !(dist_max > dist_min) || !(dist_min > 0.0)) {
        throw ConfigError("invalid distance window for the envelope fit");
    }
    std::vector<double> peak;
    for (int idx = 0; idx < map.grid.size(); ++idx) {
        const Vec2 z = map.grid.point(idx);
        if (scatterer.contains(z)) {
            continue;
        }
        const auto bin = static_cast<std::size_t>(scatterer.distance(z) / bin_width);
        if (bin >= peak.size()) {
            peak.resize(bin + 1, 0.0);
        }
        peak[bin] = std::max(peak[bin], map.values[idx]);
    }
    for (std::size_t b = peak.size(); b-- > 1;) {
        peak[b - 1] = std::max(peak[b - 1], peak[b]);
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t b = 0; b < peak.size(); ++b) {
        const double centre = (b + 0.5) * bin_width;
        if (centre < dist_min || centre > dist_max || !(peak[b] > 0.0)) {
            continue;
        }
        const double lx = std::log(centre);
        const double ly = std::log(peak[b]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) {
        throw ConfigError("too few distance bins with data for the envelope fit");
    }
    DecayFit fit;
    fit.bins = n;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

void write_triples(const ImagingMap& map, const std::filesystem::path& path) {
    std::ofstream out = open_output(path, std::ios::out);
    out.precision(17);
    for (int idx = 0; idx < map.grid.size(); ++idx) {
        const Vec2 z = map.grid.point(idx);
        out << z.x() << ' ' << z.y() << ' ' << map.values[idx] << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void write_pgm(const ImagingMap& map, const std::filesystem::path& path) {
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    const int nx = map.grid.nx();
    const int ny = map.grid.ny();
    out << "P5\n" << nx << ' ' << ny << "\n255\n";
    const double top = map.max();
    std::vector<char> row(nx);
    for (int iy = ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double v = top > 0.0 ? map.values[iy * nx + ix] / top : 0.0;
            row[ix] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v)));
        }
        out.write(row.data(), nx);
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace dsm
