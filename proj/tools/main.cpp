// Command line front end: builds family Hamiltonians, runs the recurrence
// solvers and the brute-force verifier, scans positivity domains, and dumps
// spectra and biorthogonal bases.  Exit codes: 0 success / verification
// passed, 1 verification failed, 2 usage or input error, 3 numerical
// breakdown.

#include <cryptoherm/cryptoherm.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace {

using namespace cryptoherm;

double tolerance_from_env() {
    const char* env = std::getenv("CRYPTOHERM_TOL");
    if (env == nullptr || *env == '\0') return 1e-10;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(v) || !(v > 0.0))
        throw std::invalid_argument("CRYPTOHERM_TOL must be a positive number, got '" +
                                    std::string(env) + "'");
    return v;
}

void emit(const std::string& out_path, const std::function<void(std::ostream&)>& write) {
    if (out_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open '" + out_path + "' for writing");
    write(out);
    if (!out) throw std::invalid_argument("writing '" + out_path + "' failed");
}

TridiagonalHamiltonian tridiagonal_from(const std::string& path) {
    MatrixFile f = read_matrix_file(path);
    if (f.kind != MatrixKind::tridiagonal_hamiltonian)
        throw std::invalid_argument("'" + path + "' is not a tridiagonal-hamiltonian file");
    return std::get<TridiagonalHamiltonian>(std::move(f.payload));
}

Eigen::MatrixXd hamiltonian_dense_from(const std::string& path) {
    MatrixFile f = read_matrix_file(path);
    switch (f.kind) {
        case MatrixKind::tridiagonal_hamiltonian:
            return std::get<TridiagonalHamiltonian>(f.payload).to_dense();
        case MatrixKind::pentadiagonal_hamiltonian:
            return std::get<PentaHamiltonian>(f.payload).to_dense();
        case MatrixKind::dense:
            return std::get<Eigen::MatrixXd>(f.payload);
        case MatrixKind::symmetric_band_metric:
            break;
    }
    throw std::invalid_argument("'" + path + "' does not hold a Hamiltonian");
}

SymmetricBandMetric metric_from(const std::string& path) {
    MatrixFile f = read_matrix_file(path);
    if (f.kind == MatrixKind::symmetric_band_metric)
        return std::get<SymmetricBandMetric>(std::move(f.payload));
    if (f.kind == MatrixKind::dense) {
        const Eigen::MatrixXd& m = std::get<Eigen::MatrixXd>(f.payload);
        if ((m - m.transpose()).norm() > 1e-12 * std::max(m.norm(), 1.0))
            throw std::invalid_argument("'" + path + "' holds a dense matrix that is not symmetric");
        const std::size_t n = static_cast<std::size_t>(m.rows());
        SymmetricBandMetric out(n, n - 1);
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t i = 0; i + d < n; ++i)
                out.entry(d, i) = 0.5 * (m(i, i + d) + m(i + d, i));
        return out;
    }
    throw std::invalid_argument("'" + path + "' is not a metric file");
}

struct FamilyArgs {
    std::string name;
    double a = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    bool has_a = false;
    bool has_mu = false;
    bool has_nu = false;
};

std::pair<PolynomialFamily, nlohmann::json> family_from(const FamilyArgs& args) {
    nlohmann::json meta;
    const bool parametric = args.name == "gegenbauer" || args.name == "laguerre";
    const bool jacobi = args.name == "jacobi";
    if (args.has_a && !parametric)
        throw std::invalid_argument("--param only applies to gegenbauer and laguerre");
    if ((args.has_mu || args.has_nu) && !jacobi)
        throw std::invalid_argument("--mu/--nu only apply to jacobi");
    if (parametric && !args.has_a)
        throw std::invalid_argument("family '" + args.name + "' requires --param");
    if (jacobi && !(args.has_mu && args.has_nu))
        throw std::invalid_argument("family 'jacobi' requires --mu and --nu");

    if (args.name == "gegenbauer") {
        meta = {{"family", "gegenbauer"}, {"a", args.a}};
        return {Gegenbauer{args.a}, meta};
    }
    if (args.name == "laguerre") {
        meta = {{"family", "laguerre"}, {"a", args.a}};
        return {Laguerre{args.a}, meta};
    }
    if (args.name == "tschebyshev" || args.name == "chebyshev") {
        meta = {{"family", "tschebyshev"}};
        return {Tschebyshev{}, meta};
    }
    if (args.name == "hermite") {
        meta = {{"family", "hermite"}};
        return {Hermite{}, meta};
    }
    if (args.name == "legendre") {
        meta = {{"family", "legendre"}};
        return {Legendre{}, meta};
    }
    if (jacobi) {
        meta = {{"family", "jacobi"}, {"mu", args.mu}, {"nu", args.nu}};
        return {Jacobi{args.mu, args.nu}, meta};
    }
    throw std::invalid_argument("unknown family '" + args.name + "'");
}

int run_verify(const std::string& h_path, const std::string& theta_path, double tol,
               bool require_positive, bool with_kappa, const std::string& out_path) {
    const Eigen::MatrixXd hd = hamiltonian_dense_from(h_path);
    const SymmetricBandMetric theta = metric_from(theta_path);
    if (theta.size() != static_cast<std::size_t>(hd.rows()))
        throw std::invalid_argument("Hamiltonian and metric sizes differ");

    VerifyReport report;
    report.residual = dieudonne_residual(hd, theta);
    report.relative_residual = relative_dieudonne_residual(hd, theta);
    report.min_eigenvalue = min_eigenvalue_symmetric(theta);
    report.null_space_dimension = null_space_band(hd, theta.bandwidth(), tol).dimension;
    report.pass = report.relative_residual <= tol &&
                  (!require_positive || report.min_eigenvalue > 0.0);
    if (with_kappa && report.relative_residual <= tol) {
        const BiorthogonalBasis basis = biorthogonal_basis(tridiagonal_from(h_path));
        report.kappa = kappa_from_band_metric(basis, theta).kappa;
    }
    emit(out_path, [&](std::ostream& out) { out << to_json(report).dump(2) << '\n'; });
    return report.pass ? 0 : 1;
}

int run_penta(const std::string& couplings_path, const PentaSeeds& seeds, double tol,
              const std::string& out_prefix) {
    MatrixFile f = read_matrix_file(couplings_path);
    if (f.kind != MatrixKind::pentadiagonal_hamiltonian)
        throw std::invalid_argument("'" + couplings_path +
                                    "' is not a pentadiagonal-hamiltonian file");
    const PentaPair pair = build_penta_pair(std::get<PentaHamiltonian>(f.payload), seeds);

    nlohmann::json seed_meta = {{"b11", seeds.b11},
                                {"b12", seeds.b12},
                                {"b22", seeds.b22},
                                {"b23", seeds.b23},
                                {"a11", seeds.a11}};
    write_matrix_file(out_prefix + ".hamiltonian.json",
                      MatrixFile(MatrixKind::pentadiagonal_hamiltonian, pair.hamiltonian,
                                 nlohmann::json{{"seeds", seed_meta}}));
    write_matrix_file(out_prefix + ".metric.json",
                      MatrixFile(MatrixKind::symmetric_band_metric, pair.metric,
                                 nlohmann::json{{"band", 1}, {"seeds", seed_meta}}));

    const Eigen::MatrixXd hd = pair.hamiltonian.to_dense();
    VerifyReport report;
    report.residual = dieudonne_residual(hd, pair.metric);
    report.relative_residual = relative_dieudonne_residual(hd, pair.metric);
    report.min_eigenvalue = min_eigenvalue_symmetric(pair.metric);
    report.null_space_dimension = verify_penta(pair.hamiltonian, tol).dimension;
    report.pass = report.relative_residual <= tol;
    std::cout << to_json(report).dump(2) << '\n';
    return report.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band metrics for quasi-Hermitian band Hamiltonians"};
    app.require_subcommand(1);

    // hamiltonian
    auto* cmd_h = app.add_subcommand("hamiltonian", "Build a family Hamiltonian");
    FamilyArgs fam;
    std::size_t size = 0;
    std::string out_path;
    cmd_h->add_option("--family", fam.name, "Family name")
        ->required()
        ->check(CLI::IsMember(
            {"gegenbauer", "laguerre", "tschebyshev", "chebyshev", "hermite", "legendre", "jacobi"}));
    cmd_h->add_option("--size", size, "Matrix dimension")->required()->check(CLI::PositiveNumber);
    auto* opt_a = cmd_h->add_option("--param", fam.a, "Family parameter a");
    auto* opt_mu = cmd_h->add_option("--mu", fam.mu, "Jacobi parameter mu");
    auto* opt_nu = cmd_h->add_option("--nu", fam.nu, "Jacobi parameter nu");
    cmd_h->add_option("--out", out_path, "Output file (stdout when omitted)");

    // metric
    auto* cmd_m = app.add_subcommand("metric", "Solve for a band metric by recurrence");
    std::string h_path;
    std::size_t band = 0;
    double seed = 1.0;
    cmd_m->add_option("--hamiltonian", h_path, "Tridiagonal Hamiltonian file")->required();
    cmd_m->add_option("--band", band, "Bandwidth of the component: 0, 1 or 2")
        ->required()
        ->check(CLI::Range(std::size_t{0}, std::size_t{2}));
    cmd_m->add_option("--seed", seed, "Leading free entry of the component (default 1)");
    cmd_m->add_option("--out", out_path, "Output file (stdout when omitted)");

    // verify
    auto* cmd_v = app.add_subcommand("verify", "Check a (Hamiltonian, metric) pair");
    std::string theta_path;
    double tol = 0.0;
    bool require_positive = false;
    bool with_kappa = false;
    cmd_v->add_option("--hamiltonian", h_path, "Hamiltonian file")->required();
    cmd_v->add_option("--metric", theta_path, "Metric file")->required();
    auto* opt_tol_v = cmd_v->add_option("--tol", tol, "Relative residual tolerance");
    cmd_v->add_flag("--require-positive", require_positive,
                    "Fail unless the metric is positive definite");
    cmd_v->add_flag("--kappa", with_kappa, "Report the spectral kappa coordinates");
    cmd_v->add_option("--out", out_path, "Report output file (stdout when omitted)");

    // scan
    auto* cmd_s = app.add_subcommand("scan", "Scan positivity of diagonal + alpha*tri + beta*penta");
    double alpha_lo = -1.0, alpha_hi = 1.0, beta_lo = -1.0, beta_hi = 1.0;
    std::size_t grid = 21;
    std::string components = "dtp";
    cmd_s->add_option("--hamiltonian", h_path, "Tridiagonal Hamiltonian file")->required();
    cmd_s->add_option("--components", components,
                      "Which components to build: subset of 'dtp' (default dtp)");
    cmd_s->add_option("--alpha-min", alpha_lo, "Lower alpha bound (default -1)");
    cmd_s->add_option("--alpha-max", alpha_hi, "Upper alpha bound (default 1)");
    cmd_s->add_option("--beta-min", beta_lo, "Lower beta bound (default -1)");
    cmd_s->add_option("--beta-max", beta_hi, "Upper beta bound (default 1)");
    cmd_s->add_option("--grid", grid, "Points per axis (default 21)")->check(CLI::PositiveNumber);
    cmd_s->add_option("--out", out_path, "CSV output file (stdout when omitted)");

    // penta
    auto* cmd_p = app.add_subcommand(
        "penta", "Construct the paired (pentadiagonal H, tridiagonal metric) from couplings");
    PentaSeeds seeds;
    std::string out_prefix;
    cmd_p->add_option("--couplings", h_path, "Pentadiagonal couplings file (diagonal ignored)")
        ->required();
    cmd_p->add_option("--b11", seeds.b11, "Metric seed Theta(0,0) (default 0)");
    cmd_p->add_option("--b12", seeds.b12, "Metric seed Theta(0,1) (default 1, must be nonzero)");
    cmd_p->add_option("--b22", seeds.b22, "Metric seed Theta(1,1) (default 0)");
    cmd_p->add_option("--b23", seeds.b23, "Metric seed Theta(1,2) (default 1)");
    cmd_p->add_option("--a11", seeds.a11, "Hamiltonian seed H(0,0) (default 0)");
    auto* opt_tol_p = cmd_p->add_option("--tol", tol, "Relative residual tolerance");
    cmd_p->add_option("--out-prefix", out_prefix, "Prefix for the two output files")->required();

    // spectrum
    auto* cmd_e = app.add_subcommand("spectrum", "Eigenvalues of a tridiagonal Hamiltonian");
    std::string method = "automatic";
    cmd_e->add_option("--hamiltonian", h_path, "Tridiagonal Hamiltonian file")->required();
    cmd_e->add_option("--method", method, "automatic, symmetrize or general")
        ->check(CLI::IsMember({"automatic", "symmetrize", "general"}));
    cmd_e->add_option("--out", out_path, "CSV output file (stdout when omitted)");

    // basis
    auto* cmd_b = app.add_subcommand("basis", "Biorthogonal eigenbasis of a tridiagonal Hamiltonian");
    std::string basis_metric_path;
    cmd_b->add_option("--hamiltonian", h_path, "Tridiagonal Hamiltonian file")->required();
    cmd_b->add_option("--metric", basis_metric_path,
                      "Optional metric file; adds kappa/gamma coordinates");
    cmd_b->add_option("--out", out_path, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const double default_tol = tolerance_from_env();

        if (app.got_subcommand(cmd_h)) {
            fam.has_a = opt_a->count() > 0;
            fam.has_mu = opt_mu->count() > 0;
            fam.has_nu = opt_nu->count() > 0;
            auto [family, meta] = family_from(fam);
            const TridiagonalHamiltonian h = build_hamiltonian(family, size);
            const MatrixFile file(MatrixKind::tridiagonal_hamiltonian, h, meta);
            if (out_path.empty())
                std::cout << to_json(file).dump(2) << '\n';
            else
                write_matrix_file(out_path, file);
        } else if (app.got_subcommand(cmd_m)) {
            const TridiagonalHamiltonian h = tridiagonal_from(h_path);
            double rescale = 1.0;
            SymmetricBandMetric m(1, 0);
            switch (band) {
                case 0: m = diagonal_metric(h, seed, &rescale); break;
                case 1: m = tridiagonal_metric(h, seed, &rescale); break;
                default: m = pentadiagonal_metric(h, seed, &rescale); break;
            }
            nlohmann::json meta = {{"band", band}, {"seed", seed}};
            if (rescale != 1.0) meta["rescale"] = rescale;
            const MatrixFile file(MatrixKind::symmetric_band_metric, m, meta);
            if (out_path.empty())
                std::cout << to_json(file).dump(2) << '\n';
            else
                write_matrix_file(out_path, file);
        } else if (app.got_subcommand(cmd_v)) {
            return run_verify(h_path, theta_path, opt_tol_v->count() ? tol : default_tol,
                              require_positive, with_kappa, out_path);
        } else if (app.got_subcommand(cmd_s)) {
            const TridiagonalHamiltonian h = tridiagonal_from(h_path);
            MetricComponents parts;
            for (char c : components) {
                switch (c) {
                    case 'd': parts.diagonal = diagonal_metric(h); break;
                    case 't': parts.tridiagonal = tridiagonal_metric(h); break;
                    case 'p': parts.pentadiagonal = pentadiagonal_metric(h); break;
                    default:
                        throw std::invalid_argument("--components takes a subset of 'dtp'");
                }
            }
            const PositivityScan scan =
                positivity_scan(parts, alpha_lo, alpha_hi, beta_lo, beta_hi, grid);
            emit(out_path, [&](std::ostream& out) { write_scan_csv(out, scan); });
        } else if (app.got_subcommand(cmd_p)) {
            return run_penta(h_path, seeds, opt_tol_p->count() ? tol : default_tol, out_prefix);
        } else if (app.got_subcommand(cmd_e)) {
            const TridiagonalHamiltonian h = tridiagonal_from(h_path);
            const SpectrumMethod m = method == "symmetrize" ? SpectrumMethod::symmetrize
                                     : method == "general"  ? SpectrumMethod::general
                                                            : SpectrumMethod::automatic;
            const Spectrum s = spectrum(h, m);
            emit(out_path, [&](std::ostream& out) { write_spectrum_csv(out, s); });
        } else if (app.got_subcommand(cmd_b)) {
            const TridiagonalHamiltonian h = tridiagonal_from(h_path);
            const BiorthogonalBasis basis = biorthogonal_basis(h);
            nlohmann::json j;
            j["format_version"] = matrix_file_format_version;
            j["n"] = basis.size();
            j["energies"] = basis.spectrum.energies;
            if (std::isfinite(basis.spectrum.min_gap)) j["min_gap"] = basis.spectrum.min_gap;
            auto columns = [](const Eigen::MatrixXd& m) {
                std::vector<std::vector<double>> cols;
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    cols.emplace_back(m.col(c).data(), m.col(c).data() + m.rows());
                }
                return cols;
            };
            j["kets"] = columns(basis.kets);
            j["ketkets"] = columns(basis.ketkets);
            j["overlaps"] = basis.overlaps;
            if (!basis_metric_path.empty()) {
                const KappaVector kv = kappa_from_band_metric(basis, metric_from(basis_metric_path));
                j["kappa"] = kv.kappa;
                j["gamma"] = kv.gamma;
            }
            emit(out_path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
        }
        return 0;
    } catch (const breakdown_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
