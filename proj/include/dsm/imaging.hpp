#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "dsm/geometry.hpp"
#include "dsm/measurement.hpp"
#include "dsm/types.hpp"

namespace dsm {

enum class FunctionalKind { farfield, reciprocity_gap };

std::string_view to_string(FunctionalKind kind);
FunctionalKind functional_kind_from_string(std::string_view name);

// phi_z(i) = exp(-i k xhat_i . z).
CVector probe(const DirectionSet& dirs, double k, const Vec2& z);

// W(z) = |conj(phi_z) . F phi_z|^p.
double w_farfield(const FarFieldMatrix& data, const Vec2& z, int p);

// W_RG(z) = sum_j (2 pi / N) |us(:, j) . dJ - dus(:, j) . J|^p with
//   J(i)  = J_0(k |x_i - z|)
//   dJ(i) = -k J_1(k |x_i - z|) (R0^2 - x_i . z) / (R0 |x_i - z|)
// and unconjugated dot products over the measurement points x_i. N = 0 uses
// every incident direction; 0 < N < M picks N of them spread evenly.
double w_reciprocity_gap(const CauchyDataSet& data, const Vec2& z, int p, int incidents = 0);

// Trapezoid rule for int_{|xhat| = 1} exp(i k xhat . (x - z)) ds with Q
// points against 2 pi J_0(k |x - z|).
struct FunkHecke {
    cplx numeric;
    double closed_form;
};
FunkHecke funk_hecke_check(double k, const Vec2& x, const Vec2& z, int points = 256);

struct ImagingMap {
    SamplingGrid grid;
    std::vector<double> values; // row-major like the grid
    int p = 2;
    FunctionalKind kind = FunctionalKind::farfield;
    bool normalized = false;

    double max() const;
};

ImagingMap sweep(const FarFieldMatrix& data, const SamplingGrid& grid, int p);
ImagingMap sweep(const CauchyDataSet& data, const SamplingGrid& grid, int p, int incidents = 0);

// Divides by the maximum; an all-zero map is returned unchanged.
ImagingMap normalize(ImagingMap map);

// Location of the maximum and the region where the map is at least half of it.
struct MapSummary {
    Vec2 argmax;
    double max = 0.0;
    int half_count = 0;
    Vec2 half_centroid;
    Vec2 half_min; // bounding box of the half-max region
    Vec2 half_max;
};
MapSummary summarize(const ImagingMap& map);

// Least-squares slope of log(envelope) against log(dist) outside the
// scatterer. Values are binned by distance to the boundary, each bin keeps
// its maximum, and the envelope is the running maximum from the far side.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    int bins = 0;
};
DecayFit envelope_slope(const ImagingMap& map, const BoundaryCurve& scatterer,
                        double dist_min = 0.5, double dist_max = 1.2, double bin_width = 0.05);

// "x y value" lines in grid order.
void write_triples(const ImagingMap& map, const std::filesystem::path& path);
// Binary PGM (P5), max-normalised, top row is y = ymax.
void write_pgm(const ImagingMap& map, const std::filesystem::path& path);

} // namespace dsm
