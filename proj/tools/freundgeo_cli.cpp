// Batch front end: evaluate geometry at a point, run the verification
// suite, draw samples, export the immersion surface.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain
// error. Outputs are deterministic for fixed arguments and seed; every
// numeric field is printed with 17 significant digits.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "freundgeo/freundgeo.hpp"

namespace fg = freundgeo;

namespace {

enum : int { kExitOk = 0, kExitVerifyFail = 1, kExitUsage = 2, kExitDomain = 3 };

struct CommonOpts {
    std::vector<double> params;
    double alpha = 0.0;  // the Levi-Civita member by default
    std::string format = "text";
    std::string output;
};

std::filesystem::path output_dir() {
    if (const char* env = std::getenv("FREUNDGEO_OUTPUT_DIR")) return env;
    return ".";
}

std::ofstream open_output(const std::string& name) {
    const auto path = output_dir() / std::filesystem::path(name);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path.string());
    return os;
}

// CLI paths clamp positive values to a sane window; nonpositive input is
// left for library validation to reject.
double clamp_param(double v) {
    if (v > 0.0 && (v < 1e-6 || v > 1e6)) {
        std::cerr << "warning: parameter " << fg::fmt17(v)
                  << " clamped to [1e-6, 1e6]\n";
        return std::clamp(v, 1e-6, 1e6);
    }
    return v;
}

fg::FreundParams to_params4(const std::vector<double>& v) {
    if (v.size() != 4) throw CLI::ValidationError("--params", "expected 4 comma-separated values");
    return {clamp_param(v[0]), clamp_param(v[1]), clamp_param(v[2]), clamp_param(v[3])};
}

// minimal ordered JSON writer; 17 significant digits everywhere
struct Json {
    std::ostringstream os;
    bool first = true;

    Json() { os << "{"; }
    void sep() {
        if (!first) os << ",";
        first = false;
    }
    void num(const std::string& k, double v) {
        sep();
        os << "\"" << k << "\":" << fg::fmt17(v);
    }
    void str(const std::string& k, const std::string& v) {
        sep();
        os << "\"" << k << "\":\"" << v << "\"";
    }
    void raw(const std::string& k, const std::string& v) {
        sep();
        os << "\"" << k << "\":" << v;
    }
    std::string done() { return os.str() + "}"; }
};

template <int N>
std::string json_matrix(const fg::SquareMatrix<N>& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < N; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < N; ++j) os << (j ? "," : "") << fg::fmt17(m(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

template <int N>
void print_matrix_text(const fg::SquareMatrix<N>& m, std::ostream& os) {
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) os << (j ? " " : "") << fg::fmt17(m(i, j));
        os << "\n";
    }
}

template <int N>
void print_matrix_csv(const fg::SquareMatrix<N>& m, std::ostream& os) {
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) os << (j ? "," : "") << fg::fmt17(m(i, j));
        os << "\n";
    }
}

std::string christoffel_entries_json(const fg::ChristoffelLower<4>& lo,
                                     const fg::ChristoffelUpper<4>& up) {
    std::ostringstream os;
    os << "{\"lower\":[";
    bool first = true;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                if (lo(i, j, k) != 0.0) {
                    os << (first ? "" : ",") << "{\"i\":" << i + 1 << ",\"j\":" << j + 1
                       << ",\"k\":" << k + 1 << ",\"value\":" << fg::fmt17(lo(i, j, k)) << "}";
                    first = false;
                }
    os << "],\"upper\":[";
    first = true;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                if (up(i, j, k) != 0.0) {
                    os << (first ? "" : ",") << "{\"i\":" << i + 1 << ",\"j\":" << j + 1
                       << ",\"k\":" << k + 1 << ",\"value\":" << fg::fmt17(up(i, j, k)) << "}";
                    first = false;
                }
    os << "]}";
    return os.str();
}

int run_submanifold(const std::string& family, const CommonOpts& o) {
    const fg::AlphaIndex a{o.alpha};
    Json j;
    j.str("command", "submanifold");
    j.str("family", family);
    j.num("alpha", o.alpha);
    std::ostringstream text;
    if (family == "f1") {
        if (o.params.size() != 2) throw CLI::ValidationError("--params", "f1 takes 2 values");
        const fg::F1Point p{clamp_param(o.params[0]), clamp_param(o.params[1])};
        const auto m = fg::f1_metric(p);
        const auto c = fg::f1_connection(p, a);
        j.raw("metric", json_matrix<2>(m.g));
        j.num("gamma_upper_111", c.upper(0, 0, 0));
        j.num("gamma_upper_222", c.upper(1, 1, 1));
        text << "metric:\n";
        print_matrix_text<2>(m.g, text);
        text << "gamma^1_11 " << fg::fmt17(c.upper(0, 0, 0)) << "\n";
        text << "gamma^2_22 " << fg::fmt17(c.upper(1, 1, 1)) << "\n";
    } else if (family == "f2") {
        if (o.params.size() != 2) throw CLI::ValidationError("--params", "f2 takes 2 values");
        const fg::F2Point p{clamp_param(o.params[0]), clamp_param(o.params[1])};
        const auto m = fg::f2_metric(p);
        const auto pot = fg::f2_potential(p);
        const auto dual = fg::f2_to_dual(p);
        j.raw("metric", json_matrix<2>(m.g));
        j.num("potential", pot.value);
        j.num("dual_potential", fg::f2_dual_potential(p));
        j.num("eta1", dual.eta1);
        j.num("eta2", dual.eta2);
        j.num("covariance", fg::f2_covariance(p));
        j.num("correlation", fg::f2_correlation(p));
        text << "metric:\n";
        print_matrix_text<2>(m.g, text);
        text << "potential " << fg::fmt17(pot.value) << "\n";
        text << "dual_potential " << fg::fmt17(fg::f2_dual_potential(p)) << "\n";
        text << "eta " << fg::fmt17(dual.eta1) << " " << fg::fmt17(dual.eta2) << "\n";
        text << "covariance " << fg::fmt17(fg::f2_covariance(p)) << "\n";
        text << "correlation " << fg::fmt17(fg::f2_correlation(p)) << "\n";
    } else if (family == "f3") {
        if (o.params.size() != 2) throw CLI::ValidationError("--params", "f3 takes 2 values");
        const fg::F3Point p{clamp_param(o.params[0]), clamp_param(o.params[1])};
        const auto m = fg::f3_metric(p);
        const auto c = fg::f3_connection(p, a);
        j.raw("metric", json_matrix<2>(m.g));
        std::ostringstream cu;
        cu << "[";
        bool first = true;
        for (int i = 0; i < 2; ++i)
            for (int jj = i; jj < 2; ++jj)
                for (int k = 0; k < 2; ++k)
                    if (c(i, jj, k) != 0.0) {
                        cu << (first ? "" : ",") << "{\"i\":" << i + 1 << ",\"j\":" << jj + 1
                           << ",\"k\":" << k + 1 << ",\"value\":" << fg::fmt17(c(i, jj, k)) << "}";
                        first = false;
                    }
        cu << "]";
        j.raw("gamma_upper", cu.str());
        text << "metric:\n";
        print_matrix_text<2>(m.g, text);
        for (int i = 0; i < 2; ++i)
            for (int jj = i; jj < 2; ++jj)
                for (int k = 0; k < 2; ++k)
                    if (c(i, jj, k) != 0.0)
                        text << "gamma^" << k + 1 << "_" << i + 1 << jj + 1 << " "
                             << fg::fmt17(c(i, jj, k)) << "\n";
    } else if (family == "f4") {
        if (o.params.size() != 3) throw CLI::ValidationError("--params", "f4 takes 3 values");
        const fg::ACBEDPoint p{clamp_param(o.params[0]), clamp_param(o.params[1]),
                               clamp_param(o.params[2])};
        const auto m = fg::acbed_metric(p);
        const auto fr = fg::acbed_to_freund(p);
        j.raw("metric", json_matrix<3>(m.g));
        j.raw("freund_params", "[" + fg::fmt17(fr.alpha1) + "," + fg::fmt17(fr.beta1) + "," +
                                   fg::fmt17(fr.alpha2) + "," + fg::fmt17(fr.beta2) + "]");
        j.num("covariance", fg::acbed_covariance(p));
        j.num("correlation", fg::acbed_correlation(p));
        text << "metric:\n";
        print_matrix_text<3>(m.g, text);
        text << "freund_params " << fg::fmt17(fr.alpha1) << " " << fg::fmt17(fr.beta1) << " "
             << fg::fmt17(fr.alpha2) << " " << fg::fmt17(fr.beta2) << "\n";
        text << "covariance " << fg::fmt17(fg::acbed_covariance(p)) << "\n";
        text << "correlation " << fg::fmt17(fg::acbed_correlation(p)) << "\n";
    } else {
        throw CLI::ValidationError("--family", "expected one of f1, f2, f3, f4");
    }
    if (o.format == "json") {
        std::cout << j.done() << "\n";
    } else {
        std::cout << text.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information geometry of the bivariate mixture exponential 4-manifold"};
    app.require_subcommand(1);

    CommonOpts o;
    auto add_common = [&](CLI::App* cmd, bool needs_params = true) {
        if (needs_params)
            cmd->add_option("--params", o.params, "comma-separated coordinates")
                ->required()
                ->delimiter(',');
        cmd->add_option("--alpha", o.alpha, "connection parameter (default 0)");
        cmd->add_option("--format", o.format, "text|json|csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        cmd->add_option("--output", o.output, "output file name (under FREUNDGEO_OUTPUT_DIR)");
    };

    auto* metric = app.add_subcommand("metric", "Fisher metric and inverse at a point");
    add_common(metric);
    auto* connection = app.add_subcommand("connection", "connection coefficients at a point");
    add_common(connection);
    auto* curvature = app.add_subcommand("curvature", "curvature tensor at a point");
    add_common(curvature);
    auto* ricci = app.add_subcommand("ricci", "Ricci tensor with eigen system");
    add_common(ricci);
    auto* scalar = app.add_subcommand("scalar", "scalar curvature");
    add_common(scalar);
    auto* sectional = app.add_subcommand("sectional", "sectional and mean curvatures");
    add_common(sectional);

    auto* sub = app.add_subcommand("submanifold", "restricted-family geometry");
    std::string family = "f1";
    sub->add_option("--family", family, "f1|f2|f3|f4")->required();
    add_common(sub);

    auto* immerse_cmd = app.add_subcommand("immerse", "surface mesh export (OBJ + CSV)");
    double u_lo = 0.2, u_hi = 3.0, v_lo = 0.2, v_hi = 3.0, tube = 0.25;
    int resolution = 64;
    immerse_cmd->add_option("--u-min", u_lo);
    immerse_cmd->add_option("--u-max", u_hi);
    immerse_cmd->add_option("--v-min", v_lo);
    immerse_cmd->add_option("--v-max", v_hi);
    immerse_cmd->add_option("--resolution", resolution, "vertices per side (default 64)");
    immerse_cmd->add_option("--tube-radius", tube, "tube radius around the diagonal");
    std::string mesh_base = "immersion";
    immerse_cmd->add_option("--output", mesh_base, "output base name (default 'immersion')");

    auto* sample_cmd = app.add_subcommand("sample", "draw pairs and write CSV");
    std::uint64_t seed = 1;
    std::size_t count = 1000;
    sample_cmd->add_option("--params", o.params, "alpha1,beta1,alpha2,beta2")
        ->required()
        ->delimiter(',');
    sample_cmd->add_option("-n,--count", count, "number of pairs");
    sample_cmd->add_option("--seed", seed, "RNG seed (default 1)");
    sample_cmd->add_option("--output", o.output, "CSV file name (default stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "run the closed-form vs oracle suite");
    std::string grid = "standard";
    std::uint64_t vseed = 0x5eed0001u;
    verify_cmd->add_option("--grid", grid, "coarse|standard")
        ->check(CLI::IsMember({"coarse", "standard"}));
    verify_cmd->add_option("--seed", vseed, "seed for the randomized sweeps");
    verify_cmd->add_option("--output", o.output, "report base name (writes .txt and .csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help or the error message
        return e.get_name() == "CallForHelp" ? kExitOk : kExitUsage;
    }

    try {
        const fg::AlphaIndex a{o.alpha};
        if (metric->parsed()) {
            const auto p = to_params4(o.params);
            const auto g = fg::fisher_metric(p);
            const auto gi = fg::fisher_metric_inverse(p);
            if (o.format == "json") {
                Json j;
                j.str("command", "metric");
                j.raw("metric", json_matrix<4>(g.g));
                j.raw("inverse", json_matrix<4>(gi.g));
                std::cout << j.done() << "\n";
            } else if (o.format == "csv") {
                print_matrix_csv<4>(g.g, std::cout);
            } else {
                std::cout << "metric:\n";
                print_matrix_text<4>(g.g, std::cout);
                std::cout << "inverse:\n";
                print_matrix_text<4>(gi.g, std::cout);
            }
        } else if (connection->parsed()) {
            const auto p = to_params4(o.params);
            const auto lo = fg::christoffel_lower(p, a);
            const auto up = fg::christoffel_upper(p, a);
            if (o.format == "json") {
                Json j;
                j.str("command", "connection");
                j.num("alpha", o.alpha);
                j.raw("gamma", christoffel_entries_json(lo, up));
                std::cout << j.done() << "\n";
            } else {
                for (int i = 0; i < 4; ++i)
                    for (int jj = i; jj < 4; ++jj)
                        for (int k = 0; k < 4; ++k)
                            if (lo(i, jj, k) != 0.0)
                                std::cout << "gamma_" << i + 1 << jj + 1 << "," << k + 1 << " "
                                          << fg::fmt17(lo(i, jj, k)) << "\n";
                for (int i = 0; i < 4; ++i)
                    for (int jj = i; jj < 4; ++jj)
                        for (int k = 0; k < 4; ++k)
                            if (up(i, jj, k) != 0.0)
                                std::cout << "gamma^" << k + 1 << "_" << i + 1 << jj + 1 << " "
                                          << fg::fmt17(up(i, jj, k)) << "\n";
            }
        } else if (curvature->parsed()) {
            const auto p = to_params4(o.params);
            const auto r = fg::curvature_tensor(p, a);
            if (o.format == "json") {
                std::ostringstream comps;
                comps << "[";
                bool first = true;
                for (int i = 0; i < 4; ++i)
                    for (int jj = i + 1; jj < 4; ++jj)
                        for (int k = 0; k < 4; ++k)
                            for (int l = k + 1; l < 4; ++l)
                                if (std::make_pair(i, jj) <= std::make_pair(k, l) &&
                                    r(i, jj, k, l) != 0.0) {
                                    comps << (first ? "" : ",") << "{\"ijkl\":\"" << i + 1
                                          << jj + 1 << k + 1 << l + 1
                                          << "\",\"value\":" << fg::fmt17(r(i, jj, k, l)) << "}";
                                    first = false;
                                }
                comps << "]";
                Json j;
                j.str("command", "curvature");
                j.num("alpha", o.alpha);
                j.raw("components", comps.str());
                std::cout << j.done() << "\n";
            } else {
                for (int i = 0; i < 4; ++i)
                    for (int jj = i + 1; jj < 4; ++jj)
                        for (int k = 0; k < 4; ++k)
                            for (int l = k + 1; l < 4; ++l)
                                if (std::make_pair(i, jj) <= std::make_pair(k, l) &&
                                    r(i, jj, k, l) != 0.0)
                                    std::cout << "R_" << i + 1 << jj + 1 << k + 1 << l + 1 << " "
                                              << fg::fmt17(r(i, jj, k, l)) << "\n";
            }
        } else if (ricci->parsed()) {
            const auto p = to_params4(o.params);
            const auto ric = fg::ricci_tensor(p, a);
            if (o.format == "json") {
                Json j;
                j.str("command", "ricci");
                j.num("alpha", o.alpha);
                j.raw("matrix", json_matrix<4>(ric.ric));
                std::ostringstream ev;
                ev << "[";
                for (int i = 0; i < 4; ++i) ev << (i ? "," : "") << fg::fmt17(ric.eigenvalues[i]);
                ev << "]";
                j.raw("eigenvalues", ev.str());
                j.raw("eigenvectors", json_matrix<4>(ric.eigenvectors));
                std::cout << j.done() << "\n";
            } else {
                std::cout << "ricci:\n";
                print_matrix_text<4>(ric.ric, std::cout);
                std::cout << "eigenvalues:";
                for (double v : ric.eigenvalues) std::cout << " " << fg::fmt17(v);
                std::cout << "\neigenvectors (columns):\n";
                print_matrix_text<4>(ric.eigenvectors, std::cout);
            }
        } else if (scalar->parsed()) {
            const auto p = to_params4(o.params);
            const double v = fg::scalar_curvature(p, a);
            if (o.format == "json") {
                Json j;
                j.str("command", "scalar");
                j.num("alpha", o.alpha);
                j.num("value", v);
                std::cout << j.done() << "\n";
            } else {
                std::cout << fg::fmt17(v) << "\n";
            }
        } else if (sectional->parsed()) {
            const auto p = to_params4(o.params);
            const auto sec = fg::sectional_curvatures(p, a);
            const auto mean = fg::mean_curvatures(p, a);
            if (o.format == "json") {
                std::ostringstream planes, means;
                planes << "[";
                bool first = true;
                for (int i = 0; i < 4; ++i)
                    for (int jj = i + 1; jj < 4; ++jj) {
                        planes << (first ? "" : ",") << "{\"plane\":\"" << i + 1 << jj + 1
                               << "\",\"value\":" << fg::fmt17(sec(i, jj)) << "}";
                        first = false;
                    }
                planes << "]";
                means << "[";
                for (int i = 0; i < 4; ++i) means << (i ? "," : "") << fg::fmt17(mean(i));
                means << "]";
                Json j;
                j.str("command", "sectional");
                j.num("alpha", o.alpha);
                j.raw("sectional", planes.str());
                j.raw("mean", means.str());
                std::cout << j.done() << "\n";
            } else {
                for (int i = 0; i < 4; ++i)
                    for (int jj = i + 1; jj < 4; ++jj)
                        std::cout << "rho(" << i + 1 << "," << jj + 1 << ") "
                                  << fg::fmt17(sec(i, jj)) << "\n";
                for (int i = 0; i < 4; ++i)
                    std::cout << "rho(" << i + 1 << ") " << fg::fmt17(mean(i)) << "\n";
            }
        } else if (sub->parsed()) {
            return run_submanifold(family, o);
        } else if (immerse_cmd->parsed()) {
            const auto mesh =
                fg::build_mesh({u_lo, u_hi}, {v_lo, v_hi}, resolution, tube);
            auto obj = open_output(mesh_base + ".obj");
            fg::export_obj(mesh, obj);
            auto csv = open_output(mesh_base + ".csv");
            fg::export_csv(mesh, csv);
            std::cout << "wrote " << (output_dir() / (mesh_base + ".obj")).string() << " and "
                      << (output_dir() / (mesh_base + ".csv")).string() << "\n";
        } else if (sample_cmd->parsed()) {
            const auto p = to_params4(o.params);
            const auto batch = fg::sample(p, count, seed);
            if (o.output.empty()) {
                fg::export_csv(batch, std::cout);
            } else {
                auto os = open_output(o.output);
                fg::export_csv(batch, os);
            }
        } else if (verify_cmd->parsed()) {
            fg::verify::VerifyOptions vo;
            vo.grid = (grid == "coarse") ? fg::verify::VerifyOptions::Grid::coarse
                                         : fg::verify::VerifyOptions::Grid::standard;
            vo.seed = vseed;
            const auto results = fg::verify::run_verification(vo);
            fg::verify::write_text_report(results, std::cout);
            if (!o.output.empty()) {
                auto txt = open_output(o.output + ".txt");
                fg::verify::write_text_report(results, txt);
                auto csv = open_output(o.output + ".csv");
                fg::verify::write_csv_report(results, csv);
            }
            return fg::verify::all_passed(results) ? kExitOk : kExitVerifyFail;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFail;
    }
    return kExitOk;
}
