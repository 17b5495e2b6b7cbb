#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "dsm/geometry.hpp"
#include "dsm/types.hpp"

namespace dsm {

enum class Provenance { series, bie };

std::string_view to_string(Provenance p);

struct NoiseDescriptor {
    double delta = 0.0;
    std::uint64_t seed = 0;
};

// F(i, j) = (2 pi / M) u_inf(x_i, y_j) on M equidistant directions; the
// Riemann-sum weight is part of the stored entries.
struct FarFieldMatrix {
    CMatrix values;
    double k = 0.0;
    Provenance provenance = Provenance::series;
    std::optional<NoiseDescriptor> noise;
    std::map<std::string, std::string> meta;

    int size() const { return static_cast<int>(values.rows()); }
    DirectionSet directions() const { return DirectionSet(size()); }
    double weight() const { return 2.0 * pi / size(); }
    // Unweighted far-field pattern u_inf(x_i, y_j).
    CMatrix pattern() const { return values / weight(); }
};

// us(i, j) = u^s(x_i, y_j), dus(i, j) = d_r u^s(x_i, y_j) with
// x_i = R0 (cos theta_i, sin theta_i). No quadrature weight.
struct CauchyDataSet {
    CMatrix us;
    CMatrix dus;
    double radius = 3.0;
    double k = 0.0;
    Provenance provenance = Provenance::series;
    std::optional<NoiseDescriptor> noise;
    std::map<std::string, std::string> meta;

    int size() const { return static_cast<int>(us.cols()); }
    DirectionSet directions() const { return DirectionSet(size()); }
    Vec2 point(int i) const { return radius * directions().direction(i); }
};

// Spectral norm by power iteration on A^H A (relative tolerance 1e-13).
double spectral_norm(const CMatrix& a);

// E with real and imaginary parts uniform on [-1, 1], then divided by its
// spectral norm. Entries are drawn row-major, real part first, from
// std::mt19937_64 seeded with splitmix64(seed + stream * 0x9E3779B97F4A7C15);
// each double is (bits >> 11) * 2^-53 mapped to [-1, 1).
CMatrix noise_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                     std::uint64_t stream);

// out(i, j) = in(i, j) (1 + delta E(i, j)), delta in [0, 1).
CMatrix add_noise(const CMatrix& data, double delta, std::uint64_t seed, std::uint64_t stream = 0);

// Far-field data uses stream 0; Cauchy data uses streams 1 (us) and 2 (dus).
FarFieldMatrix add_noise(const FarFieldMatrix& data, double delta, std::uint64_t seed);
CauchyDataSet add_noise(const CauchyDataSet& data, double delta, std::uint64_t seed);

// Text container:
//   dsm-data 1
//   kind farfield|cauchy
//   provenance series|bie
//   k <value>
//   directions <M>
//   radius <R0>                  (cauchy only)
//   noise <delta> <seed>         (optional)
//   meta <key> <value>           (any number)
//   matrix <name> <rows> <cols>  followed by rows*cols "re im" lines, row-major
//   end
// Doubles are written in shortest round-trip form.
using DataSet = std::variant<FarFieldMatrix, CauchyDataSet>;

void save(const FarFieldMatrix& data, const std::filesystem::path& path);
void save(const CauchyDataSet& data, const std::filesystem::path& path);
DataSet load_data(const std::filesystem::path& path);
FarFieldMatrix load_farfield(const std::filesystem::path& path);
CauchyDataSet load_cauchy(const std::filesystem::path& path);

std::string serialize(const DataSet& data);
DataSet deserialize(const std::string& text);

} // namespace dsm
