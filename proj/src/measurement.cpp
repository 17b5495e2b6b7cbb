#include "dsm/measurement.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double unit_symmetric(std::mt19937_64& gen) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

void check_delta(double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw ConfigError("noise level must lie in [0, 1), got " + std::to_string(delta));
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, int line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("line " + std::to_string(line) + ": expected a number, got '" +
                      std::string(s) + "'");
    }
    return v;
}

template <class Int>
Int parse_int(std::string_view s, int line) {
    Int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("line " + std::to_string(line) + ": expected an integer, got '" +
                      std::string(s) + "'");
    }
    return v;
}

void write_matrix(std::ostream& out, const std::string& name, const CMatrix& m) {
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag()) << '\n';
        }
    }
}

void write_header(std::ostream& out, std::string_view kind, Provenance prov, double k, int m,
                  const std::optional<NoiseDescriptor>& noise,
                  const std::map<std::string, std::string>& meta) {
    out << "dsm-data 1\n";
    out << "kind " << kind << '\n';
    out << "provenance " << to_string(prov) << '\n';
    out << "k " << format_double(k) << '\n';
    out << "directions " << m << '\n';
    if (noise) {
        out << "noise " << format_double(noise->delta) << ' ' << noise->seed << '\n';
    }
    for (const auto& [key, value] : meta) {
        out << "meta " << key << ' ' << value << '\n';
    }
}

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') {
            ++pos;
        }
        if (pos > start) {
            words.push_back(line.substr(start, pos - start));
        }
    }
    return words;
}

} // namespace

std::string_view to_string(Provenance p) { return p == Provenance::series ? "series" : "bie"; }

double spectral_norm(const CMatrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    const Eigen::Index n = a.cols();
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = cplx(1.0, 0.37 * static_cast<double>(i + 1) / static_cast<double>(n));
    }
    v.normalize();
    double sigma = 0.0;
    for (int iter = 0; iter < 50000; ++iter) {
        const CVector av = a * v;
        const double next = av.norm();
        if (next == 0.0) {
            return 0.0;
        }
        CVector w = a.adjoint() * av;
        const double wn = w.norm();
        if (wn == 0.0) {
            return next;
        }
        v = w / wn;
        if (iter > 3 && std::abs(next - sigma) <= 1e-15 * next) {
            return next;
        }
        sigma = next;
    }
    return sigma;
}

CMatrix noise_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                     std::uint64_t stream) {
    std::mt19937_64 gen(splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL));
    CMatrix e(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = unit_symmetric(gen);
            const double im = unit_symmetric(gen);
            e(i, j) = cplx(re, im);
        }
    }
    const double norm = spectral_norm(e);
    if (norm > 0.0) {
        e /= norm;
    }
    return e;
}

CMatrix add_noise(const CMatrix& data, double delta, std::uint64_t seed, std::uint64_t stream) {
    check_delta(delta);
    if (delta == 0.0) {
        return data; // (1 + 0 e) could still flip the sign of a zero
    }
    const CMatrix e = noise_matrix(data.rows(), data.cols(), seed, stream);
    CMatrix out(data.rows(), data.cols());
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            out(i, j) = data(i, j) * (1.0 + delta * e(i, j));
        }
    }
    return out;
}

FarFieldMatrix add_noise(const FarFieldMatrix& data, double delta, std::uint64_t seed) {
    FarFieldMatrix out = data;
    out.values = add_noise(data.values, delta, seed, 0);
    out.noise = NoiseDescriptor{delta, seed};
    return out;
}

CauchyDataSet add_noise(const CauchyDataSet& data, double delta, std::uint64_t seed) {
    CauchyDataSet out = data;
    out.us = add_noise(data.us, delta, seed, 1);
    out.dus = add_noise(data.dus, delta, seed, 2);
    out.noise = NoiseDescriptor{delta, seed};
    return out;
}

std::string serialize(const DataSet& data) {
    std::ostringstream out;
    if (const auto* ff = std::get_if<FarFieldMatrix>(&data)) {
        write_header(out, "farfield", ff->provenance, ff->k, ff->size(), ff->noise, ff->meta);
        write_matrix(out, "F", ff->values);
    } else {
        const auto& cd = std::get<CauchyDataSet>(data);
        write_header(out, "cauchy", cd.provenance, cd.k, cd.size(), cd.noise, cd.meta);
        out << "radius " << format_double(cd.radius) << '\n';
        write_matrix(out, "us", cd.us);
        write_matrix(out, "dus", cd.dus);
    }
    out << "end\n";
    return out.str();
}

DataSet deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (!line.empty() && line[0] != '#') {
                return true;
            }
        }
        return false;
    };

    if (!next_line() || split_words(line) != std::vector<std::string_view>{"dsm-data", "1"}) {
        throw IoError("not a dsm-data version 1 file");
    }

    std::string kind;
    Provenance prov = Provenance::series;
    std::optional<double> k;
    std::optional<int> directions;
    std::optional<double> radius;
    std::optional<NoiseDescriptor> noise;
    std::map<std::string, std::string> meta;
    std::map<std::string, CMatrix> matrices;
    bool ended = false;

    while (next_line()) {
        const auto words = split_words(line);
        if (words.empty()) {
            continue;
        }
        const std::string_view key = words[0];
        auto expect = [&](std::size_t n) {
            if (words.size() != n) {
                throw IoError("line " + std::to_string(lineno) + ": malformed '" +
                              std::string(key) + "' record");
            }
        };
        if (key == "end") {
            ended = true;
            break;
        } else if (key == "kind") {
            expect(2);
            kind = std::string(words[1]);
        } else if (key == "provenance") {
            expect(2);
            if (words[1] == "series") {
                prov = Provenance::series;
            } else if (words[1] == "bie") {
                prov = Provenance::bie;
            } else {
                throw IoError("line " + std::to_string(lineno) + ": unknown provenance");
            }
        } else if (key == "k") {
            expect(2);
            k = parse_double(words[1], lineno);
        } else if (key == "directions") {
            expect(2);
            directions = parse_int<int>(words[1], lineno);
        } else if (key == "radius") {
            expect(2);
            radius = parse_double(words[1], lineno);
        } else if (key == "noise") {
            expect(3);
            noise = NoiseDescriptor{parse_double(words[1], lineno),
                                    parse_int<std::uint64_t>(words[2], lineno)};
        } else if (key == "meta") {
            if (words.size() < 2) {
                throw IoError("line " + std::to_string(lineno) + ": malformed meta record");
            }
            const auto rest = static_cast<std::size_t>(words[1].data() - line.data()) + words[1].size();
            std::string value = rest < line.size() ? line.substr(rest) : std::string();
            const auto first = value.find_first_not_of(' ');
            value = first == std::string::npos ? std::string() : value.substr(first);
            meta[std::string(words[1])] = value;
        } else if (key == "matrix") {
            expect(4);
            const std::string name(words[1]);
            const auto rows = parse_int<int>(words[2], lineno);
            const auto cols = parse_int<int>(words[3], lineno);
            if (rows < 0 || cols < 0) {
                throw IoError("line " + std::to_string(lineno) + ": negative matrix shape");
            }
            CMatrix m(rows, cols);
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    if (!next_line()) {
                        throw IoError("truncated matrix '" + name + "'");
                    }
                    const auto entry = split_words(line);
                    if (entry.size() != 2) {
                        throw IoError("line " + std::to_string(lineno) +
                                      ": expected 're im' matrix entry");
                    }
                    m(i, j) = cplx(parse_double(entry[0], lineno), parse_double(entry[1], lineno));
                }
            }
            matrices[name] = std::move(m);
        } else {
            throw IoError("line " + std::to_string(lineno) + ": unknown record '" +
                          std::string(key) + "'");
        }
    }

    if (!ended) {
        throw IoError("missing 'end' record");
    }
    if (!k || !directions) {
        throw IoError("header lacks 'k' or 'directions'");
    }
    auto take = [&](const std::string& name) {
        const auto it = matrices.find(name);
        if (it == matrices.end()) {
            throw IoError("missing matrix '" + name + "'");
        }
        if (it->second.rows() != *directions || it->second.cols() != *directions) {
            throw IoError("matrix '" + name + "' is " + std::to_string(it->second.rows()) + "x" +
                          std::to_string(it->second.cols()) + " but header declares " +
                          std::to_string(*directions) + " directions");
        }
        return it->second;
    };

    if (kind == "farfield") {
        FarFieldMatrix ff;
        ff.values = take("F");
        ff.k = *k;
        ff.provenance = prov;
        ff.noise = noise;
        ff.meta = std::move(meta);
        return ff;
    }
    if (kind == "cauchy") {
        if (!radius) {
            throw IoError("cauchy data lacks 'radius'");
        }
        CauchyDataSet cd;
        cd.us = take("us");
        cd.dus = take("dus");
        cd.radius = *radius;
        cd.k = *k;
        cd.provenance = prov;
        cd.noise = noise;
        cd.meta = std::move(meta);
        return cd;
    }
    throw IoError("unknown data kind '" + kind + "'");
}

void save(const FarFieldMatrix& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << serialize(DataSet(data));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void save(const CauchyDataSet& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << serialize(DataSet(data));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

DataSet load_data(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return deserialize(buf.str());
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

FarFieldMatrix load_farfield(const std::filesystem::path& path) {
    auto data = load_data(path);
    if (auto* ff = std::get_if<FarFieldMatrix>(&data)) {
        return std::move(*ff);
    }
    throw IoError(path.string() + ": expected far-field data, found Cauchy data");
}

CauchyDataSet load_cauchy(const std::filesystem::path& path) {
    auto data = load_data(path);
    if (auto* cd = std::get_if<CauchyDataSet>(&data)) {
        return std::move(*cd);
    }
    throw IoError(path.string() + ": expected Cauchy data, found far-field data");
}

} // namespace dsm
