#include "dsm/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dsm/errors.hpp"
#include "dsm/forward_bie.hpp"
#include "dsm/forward_disk.hpp"
#include "dsm/geometry.hpp"
#include "dsm/imaging.hpp"
#include "dsm/measurement.hpp"

namespace dsm::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_commas(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        parts.push_back(trim(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return parts;
}

template <typename T>
T parse_number(std::string_view word, std::string_view whole) {
    T value{};
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (word.empty() || ec != std::errc() || ptr != word.data() + word.size()) {
        throw ConfigError("cannot parse '" + std::string(whole) + "' as a number list");
    }
    return value;
}

std::string format_complex(cplx z) {
    std::ostringstream s;
    s << std::setprecision(17) << z.real() << ',' << z.imag();
    return s.str();
}

std::string format_real(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

Vec2 parse_point(std::string_view text) {
    const std::vector<double> v = parse_reals(text);
    if (v.size() != 2) {
        throw ConfigError("expected a point 'x,y', got '" + std::string(text) + "'");
    }
    return {v[0], v[1]};
}

AnisotropyMatrix checked_anisotropy(const Mat2& a) {
    try {
        return AnisotropyMatrix(a);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("--A: ") + e.what());
    }
}

struct SynthOptions {
    std::string solver = "series";
    std::string shape = "circle";
    double radius = 1.0;
    std::string center = "0,0";
    double k = 0.0;
    std::string a = "1";
    std::string n = "1";
    std::string A;
    std::string eta = "0";
    int directions = 64;
    double measurement_radius = 3.0;
    int order = default_truncation;
    int faces = 80;
    std::string data = "both";
    std::string out;
};

void cmd_synth(const SynthOptions& o, std::ostream& out) {
    const CurveKind kind = curve_kind_from_string(o.shape);
    const Vec2 center = parse_point(o.center);
    const BoundaryCurve curve = make_curve(kind, o.radius, center);
    const DirectionSet dirs(o.directions);
    const cplx eta = parse_complex(o.eta);
    if (o.data != "both" && o.data != "ff" && o.data != "cauchy") {
        throw ConfigError("--data must be ff, cauchy or both");
    }

    std::map<std::string, std::string> meta;
    meta["solver"] = o.solver;
    meta["shape"] = o.shape;
    meta["center"] = format_real(center.x()) + "," + format_real(center.y());
    meta["eta"] = format_complex(eta);

    std::pair<FarFieldMatrix, CauchyDataSet> data;
    if (o.solver == "series") {
        if (kind != CurveKind::circle) {
            throw ConfigError("the series solver only handles --shape circle");
        }
        if (center.norm() != 0.0) {
            throw ConfigError("the series solver needs a disk centred at the origin");
        }
        if (!o.A.empty()) {
            throw ConfigError("--A is a boundary element option; use --a with the series solver");
        }
        const Material2D mat{o.k, parse_complex(o.a), parse_complex(o.n), eta, o.radius};
        meta["radius"] = format_real(o.radius);
        meta["a"] = format_complex(mat.a);
        meta["n"] = format_complex(mat.n);
        meta["order"] = std::to_string(o.order);
        data = assemble_disk_data(mat, dirs, o.measurement_radius, o.order);
    } else if (o.solver == "bie") {
        if (parse_complex(o.n) != cplx(1.0)) {
            throw ConfigError("the boundary element solver assumes n = 1");
        }
        Mat2 a_matrix;
        if (!o.A.empty()) {
            a_matrix = parse_matrix(o.A);
        } else {
            const cplx a = parse_complex(o.a);
            if (a.imag() != 0.0) {
                throw ConfigError("the boundary element solver needs a real anisotropy");
            }
            a_matrix = a.real() * Mat2::Identity();
        }
        const BieMaterial mat{o.k, checked_anisotropy(a_matrix), eta};
        if (kind == CurveKind::circle) {
            meta["radius"] = format_real(o.radius);
        }
        meta["A"] = format_real(a_matrix(0, 0)) + "," + format_real(a_matrix(0, 1)) + "," +
                    format_real(a_matrix(1, 0)) + "," + format_real(a_matrix(1, 1));
        meta["faces"] = std::to_string(o.faces);
        const CollocationMesh mesh(curve, o.faces);
        data = assemble_bie_data(mesh, mat, dirs, o.measurement_radius);
    } else {
        throw ConfigError("--solver must be series or bie, got '" + o.solver + "'");
    }
    data.first.meta = meta;
    data.second.meta = meta;

    const std::filesystem::path dir(o.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    if (o.data != "cauchy") {
        save(data.first, dir / "farfield.dsm");
        out << "wrote " << (dir / "farfield.dsm").string() << '\n';
    }
    if (o.data != "ff") {
        save(data.second, dir / "cauchy.dsm");
        out << "wrote " << (dir / "cauchy.dsm").string() << '\n';
    }
}

struct NoiseOptions {
    std::string in;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_noise(const NoiseOptions& o, std::ostream& out) {
    const DataSet data = load_data(o.in);
    if (const auto* ff = std::get_if<FarFieldMatrix>(&data)) {
        save(add_noise(*ff, o.delta, o.seed), o.out);
    } else {
        save(add_noise(std::get<CauchyDataSet>(data), o.delta, o.seed), o.out);
    }
    out << "wrote " << o.out << " (delta " << o.delta << ", seed " << o.seed << ")\n";
}

struct ImageOptions {
    std::string kind = "ff";
    std::string data;
    std::optional<int> p;
    std::string grid = "-2,2,-2,2";
    std::string resolution = "100";
    int incidents = 0;
    bool raw = false;
    std::string out;
};

void cmd_image(const ImageOptions& o, std::ostream& out) {
    const FunctionalKind kind = functional_kind_from_string(o.kind);
    const std::vector<double> bounds = parse_reals(o.grid);
    if (bounds.size() != 4) {
        throw ConfigError("--grid expects xmin,xmax,ymin,ymax");
    }
    const std::vector<int> res = parse_ints(o.resolution);
    if (res.empty() || res.size() > 2) {
        throw ConfigError("--resolution expects n or nx,ny");
    }
    const SamplingGrid grid(bounds[0], bounds[1], bounds[2], bounds[3], res[0],
                            res.size() == 2 ? res[1] : res[0]);
    const int p = o.p.value_or(kind == FunctionalKind::farfield ? 2 : 3);

    const DataSet data = load_data(o.data);
    ImagingMap map;
    if (kind == FunctionalKind::farfield) {
        const auto* ff = std::get_if<FarFieldMatrix>(&data);
        if (ff == nullptr) {
            throw ConfigError(o.data + " holds Cauchy data; use --kind rg");
        }
        map = sweep(*ff, grid, p);
    } else {
        const auto* cd = std::get_if<CauchyDataSet>(&data);
        if (cd == nullptr) {
            throw ConfigError(o.data + " holds far-field data; use --kind ff");
        }
        map = sweep(*cd, grid, p, o.incidents);
    }
    if (!o.raw) {
        map = normalize(std::move(map));
    }
    write_triples(map, o.out + ".txt");
    write_pgm(map, o.out + ".pgm");

    const MapSummary s = summarize(map);
    out << std::setprecision(6);
    out << "argmax " << s.argmax.x() << ' ' << s.argmax.y() << '\n';
    out << "max " << s.max << '\n';
    out << "half-max points " << s.half_count << '\n';
    out << "half-max centroid " << s.half_centroid.x() << ' ' << s.half_centroid.y() << '\n';
    out << "half-max bbox " << s.half_min.x() << ' ' << s.half_max.x() << ' ' << s.half_min.y()
        << ' ' << s.half_max.y() << '\n';
    out << "wrote " << o.out << ".txt " << o.out << ".pgm\n";
}

struct ConvergenceOptions {
    std::string shape = "circle";
    double radius = 2.0;
    double a = 3.0;
    std::string eta = "1";
    std::string k = "2,4,6";
    std::string nf = "10,20,40,80,160";
    int directions = 64;
    double measurement_radius = 3.0;
    int order = 25;
    std::string out;
};

void cmd_convergence(const ConvergenceOptions& o, std::ostream& out) {
    if (curve_kind_from_string(o.shape) != CurveKind::circle) {
        throw ConfigError("convergence tables need the series reference: use --shape circle");
    }
    ConvergenceSetup setup;
    setup.radius = o.radius;
    setup.a = o.a;
    setup.eta = parse_complex(o.eta);
    setup.wavenumbers = parse_reals(o.k);
    setup.faces = parse_ints(o.nf);
    setup.directions = o.directions;
    setup.measurement_radius = o.measurement_radius;
    setup.reference_order = o.order;
    const std::vector<ConvergenceRow> rows = convergence_table(setup);

    std::ostringstream table;
    table << "k faces nodes farfield scattered derivative\n";
    table << std::scientific << std::setprecision(3);
    for (const ConvergenceRow& r : rows) {
        table << std::defaultfloat << r.k << ' ' << r.faces << ' ' << 3 * r.faces << ' '
              << std::scientific << r.farfield << ' ' << r.scattered << ' ' << r.derivative
              << '\n';
    }
    out << table.str();
    if (!o.out.empty()) {
        std::ofstream file(o.out);
        if (!(file << table.str())) {
            throw IoError("cannot write " + o.out);
        }
    }
}

} // namespace

cplx parse_complex(std::string_view text) {
    const std::vector<double> v = parse_reals(text);
    if (v.size() == 1) {
        return v[0];
    }
    if (v.size() == 2) {
        return {v[0], v[1]};
    }
    throw ConfigError("expected a complex value 're,im', got '" + std::string(text) + "'");
}

std::vector<double> parse_reals(std::string_view text) {
    std::vector<double> v;
    for (const std::string_view w : split_commas(text)) {
        v.push_back(parse_number<double>(w, text));
    }
    return v;
}

std::vector<int> parse_ints(std::string_view text) {
    std::vector<int> v;
    for (const std::string_view w : split_commas(text)) {
        v.push_back(parse_number<int>(w, text));
    }
    return v;
}

Mat2 parse_matrix(std::string_view text) {
    const std::vector<double> v = parse_reals(text);
    if (v.size() != 4) {
        throw ConfigError("expected a 2x2 matrix 'a11,a12,a21,a22', got '" + std::string(text) +
                          "'");
    }
    Mat2 m;
    m << v[0], v[1], v[2], v[3];
    return m;
}

std::vector<ConvergenceRow> convergence_table(const ConvergenceSetup& setup) {
    if (setup.wavenumbers.empty() || setup.faces.empty()) {
        throw ConfigError("convergence table needs at least one k and one face count");
    }
    const DirectionSet dirs(setup.directions);
    const BoundaryCurve disk = BoundaryCurve::circle(setup.radius);
    std::vector<ConvergenceRow> rows;
    for (const double k : setup.wavenumbers) {
        const Material2D series{k, setup.a, 1.0, setup.eta, setup.radius};
        const auto [ref_ff, ref_cd] =
            assemble_disk_data(series, dirs, setup.measurement_radius, setup.reference_order);
        const BieMaterial bie{k, AnisotropyMatrix::scalar(setup.a), setup.eta};
        for (const int nf : setup.faces) {
            const CollocationMesh mesh(disk, nf);
            const auto [ff, cd] = assemble_bie_data(mesh, bie, dirs, setup.measurement_radius);
            rows.push_back({k, nf, spectral_norm(ref_ff.pattern() - ff.pattern()),
                            spectral_norm(ref_cd.us - cd.us), spectral_norm(ref_cd.dus - cd.dus)});
        }
    }
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Direct sampling imaging for anisotropic scatterers with a conductive boundary",
                 "dsm"};
    app.require_subcommand(1);
    app.footer("Complex values are 're,im' (or a bare real). Matrices are row-major "
               "comma lists 'a11,a12,a21,a22'.\nExit codes: 0 success, 2 configuration, "
               "3 numerical failure, 4 I/O.");

    SynthOptions so;
    CLI::App* synth = app.add_subcommand("synth", "Synthesise far-field and Cauchy data");
    synth->add_option("--solver", so.solver, "series (disk) or bie (boundary elements)")
        ->capture_default_str();
    synth->add_option("--shape", so.shape, "circle, kite or peanut")->capture_default_str();
    synth->add_option("--radius", so.radius, "disk radius")->capture_default_str();
    synth->add_option("--center", so.center, "shape offset 'x,y'")->capture_default_str();
    synth->add_option("--k", so.k, "wavenumber")->required();
    synth->add_option("--a", so.a, "scalar anisotropy a (A = a I), complex for series")
        ->capture_default_str();
    synth->add_option("--n", so.n, "refractive index (series only)")->capture_default_str();
    synth->add_option("--A", so.A, "real SPD matrix 'a11,a12,a21,a22' (bie only)");
    synth->add_option("--eta", so.eta, "conductivity eta")->capture_default_str();
    synth->add_option("--directions", so.directions, "number of directions M")
        ->capture_default_str();
    synth->add_option("--R0", so.measurement_radius, "measurement radius")->capture_default_str();
    synth->add_option("--order", so.order, "series truncation P")->capture_default_str();
    synth->add_option("--nf", so.faces, "boundary element faces")->capture_default_str();
    synth->add_option("--data", so.data, "ff, cauchy or both")->capture_default_str();
    synth->add_option("--out", so.out, "output directory")->required();

    NoiseOptions no;
    CLI::App* noise = app.add_subcommand("noise", "Perturb a data file multiplicatively");
    noise->add_option("--in", no.in, "input data file")->required();
    noise->add_option("--delta", no.delta, "relative noise level in [0, 1)")->required();
    noise->add_option("--seed", no.seed, "generator seed")->capture_default_str();
    noise->add_option("--out", no.out, "output data file")->required();

    ImageOptions io;
    CLI::App* image = app.add_subcommand("image", "Evaluate an imaging functional on a grid");
    image->add_option("--kind", io.kind, "ff (far field) or rg (reciprocity gap)")
        ->capture_default_str();
    image->add_option("--data", io.data, "data file")->required();
    image->add_option("--p", io.p, "exponent (default 2 for ff, 3 for rg)");
    image->add_option("--grid", io.grid, "xmin,xmax,ymin,ymax")->capture_default_str();
    image->add_option("--resolution", io.resolution, "n or nx,ny")->capture_default_str();
    image->add_option("--incidents", io.incidents, "incident directions used by rg (0 = all)")
        ->capture_default_str();
    image->add_flag("--raw", io.raw, "write raw values instead of max-normalised ones");
    image->add_option("--out", io.out, "output prefix (.txt and .pgm are appended)")
        ->required();

    ConvergenceOptions co;
    CLI::App* conv =
        app.add_subcommand("convergence", "Boundary element errors against the disk series");
    conv->add_option("--shape", co.shape, "must be circle")->capture_default_str();
    conv->add_option("--radius", co.radius, "disk radius")->capture_default_str();
    conv->add_option("--a", co.a, "real scalar anisotropy")->capture_default_str();
    conv->add_option("--eta", co.eta, "conductivity eta")->capture_default_str();
    conv->add_option("--k", co.k, "comma separated wavenumbers")->capture_default_str();
    conv->add_option("--nf", co.nf, "comma separated face counts")->capture_default_str();
    conv->add_option("--directions", co.directions, "number of directions M")
        ->capture_default_str();
    conv->add_option("--R0", co.measurement_radius, "measurement radius")->capture_default_str();
    conv->add_option("--order", co.order, "series truncation of the reference")
        ->capture_default_str();
    conv->add_option("--out", co.out, "also write the table to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (CLI::App* sub : app.get_subcommands()) {
            failing = sub;
        }
        err << failing->help();
        return exit_config;
    }

    try {
        if (synth->parsed()) {
            cmd_synth(so, out);
        } else if (noise->parsed()) {
            cmd_noise(no, out);
        } else if (image->parsed()) {
            cmd_image(io, out);
        } else if (conv->parsed()) {
            cmd_convergence(co, out);
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_ok;
}

} // namespace dsm::cli
