// Batch driver for light-front (phi^4)_2 spectra: exact diagonalization,
// SA-QKSD runs through the walk block encoding, block-encoding verification,
// and critical-coupling scans.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bosonwalk/block_encoding.hpp"
#include "bosonwalk/fock.hpp"
#include "bosonwalk/hamiltonian.hpp"
#include "bosonwalk/qksd.hpp"
#include "bosonwalk/statevector.hpp"
#include "bosonwalk/walk_simulation.hpp"

using json = nlohmann::ordered_json;
using namespace bosonwalk;

namespace {

// All emitted numbers carry 12 significant digits.
std::string fmt12(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

double round12(double value) { return std::stod(fmt12(value)); }

json eigen_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(round12(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct CommonOptions {
    int total_momentum = 4;
    double lambda_over_m2 = 1.0;
    double m2 = 1.0;
    std::string sector = "both";
    std::string pivot;
    int krylov_dim = 0;
    double eps_rel = 1e-8;
    long shots = 0;
    std::uint64_t seed = 1;
    std::string expectations = "circuit";
    std::string json_path;
    std::string csv_path;
    std::string export_circuit_path;
    std::string config_path;

    ModelParams params() const { return {m2, lambda_over_m2, total_momentum}; }
};

// Flat key=value configuration, keys matching the long option names without
// dashes. Command-line flags win over config keys, config keys over defaults.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_number) + ": expected key=value");
        auto trim = [](std::string text) {
            const auto b = text.find_first_not_of(" \t\r");
            const auto e = text.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : text.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key == "config") throw std::runtime_error("config files cannot nest");
        auto* option = cmd->get_option_no_throw("--" + key);
        if (option == nullptr)
            throw std::runtime_error(path + ":" + std::to_string(line_number) + ": unknown key '" + key + "'");
        if (option->count() > 0) continue;  // command line takes precedence
        option->add_result(value);
        option->run_callback();
    }
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--K", opt.total_momentum, "total longitudinal momentum")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", opt.lambda_over_m2, "dimensionless coupling lambda/m^2");
    cmd->add_option("--m2", opt.m2, "mass-squared parameter in MeV^2");
    cmd->add_option("--sector", opt.sector, "parity sector")->check(CLI::IsMember({"even", "odd", "both"}));
    cmd->add_option("--pivot", opt.pivot, "pivot state, caret syntax such as \"4^1\" or \"2^1 1^2\"");
    cmd->add_option("--krylov-dim", opt.krylov_dim, "Krylov dimension (0 = sector dimension)");
    cmd->add_option("--eps-rel", opt.eps_rel, "canonical-orthogonalization threshold");
    cmd->add_option("--shots", opt.shots, "Hadamard-test shots (0 = exact expectations)");
    cmd->add_option("--seed", opt.seed, "shot-sampling seed");
    cmd->add_option("--expectations", opt.expectations, "expectation route for qksd")
        ->check(CLI::IsMember({"circuit", "matrix", "matrix-spectral"}));
    cmd->add_option("--json", opt.json_path, "write a JSON result document to this path");
    cmd->add_option("--csv", opt.csv_path, "write a CSV table to this path");
    cmd->add_option("--export-circuit", opt.export_circuit_path, "write the walk unitary as gate-list text");
    cmd->add_option("--config", opt.config_path, "flat key=value configuration file");
}

json meta_json(const CommonOptions& opt, const HamiltonianSpec& spec, const RegisterLayout& layout) {
    return json{{"K", opt.total_momentum},
                {"lambda", round12(opt.lambda_over_m2)},
                {"m2", round12(opt.m2)},
                {"D", spec.index_dimension},
                {"Xi", round12(spec.subnormalization)},
                {"qubits", layout.total_qubits}};
}

void write_json(const std::string& path, const json& doc) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(2) << '\n';
}

void maybe_export_circuit(const CommonOptions& opt, const HamiltonianSpec& spec, const RegisterLayout& layout) {
    if (opt.export_circuit_path.empty()) return;
    const auto walk = walk_unitary(spec, layout);
    std::ofstream out(opt.export_circuit_path);
    if (!out) throw std::runtime_error("cannot write " + opt.export_circuit_path);
    out << to_text(walk.u_h);
}

std::vector<Parity> requested_sectors(const std::string& sector) {
    if (sector == "even") return {Parity::Even};
    if (sector == "odd") return {Parity::Odd};
    return {Parity::Even, Parity::Odd};
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const CommonOptions& opt, bool print_matrix) {
    const auto spec = build_monomials(opt.params());
    const auto layout = build_layout(opt.total_momentum, spec.monomial_count);
    const auto basis = enumerate_basis(opt.total_momentum);
    const auto h = exact_matrix(spec, basis);

    std::cout << "phi^4 light-front spectrum  K = " << opt.total_momentum
              << "  lambda/m^2 = " << fmt12(opt.lambda_over_m2) << "  m^2 = " << fmt12(opt.m2) << " MeV^2\n";
    std::cout << "basis (" << basis.size() << " states):\n";
    for (const auto& state : basis)
        std::cout << "  |" << state.to_string() << ">  [" << to_string(sector_of(state)) << "]\n";
    if (print_matrix) {
        std::cout << "H matrix [MeV^2]:\n";
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            for (Eigen::Index j = 0; j < h.cols(); ++j) std::cout << (j ? " " : "  ") << fmt12(h(i, j));
            std::cout << '\n';
        }
    }

    json results;
    results["basis"] = json::array();
    for (const auto& state : basis)
        results["basis"].push_back({{"state", state.to_string()}, {"sector", to_string(sector_of(state))}});
    results["matrix"] = eigen_to_json(h);

    for (Parity sector : requested_sectors(opt.sector)) {
        const auto ids = sector_indices(basis, sector);
        if (ids.empty()) continue;
        const auto values = exact_spectrum(submatrix(h, ids));
        std::cout << to_string(sector) << "-sector eigenvalues [MeV^2]:";
        json list = json::array();
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            std::cout << ' ' << fmt12(values(i));
            list.push_back(round12(values(i)));
        }
        std::cout << '\n';
        results[std::string(to_string(sector)) + "_eigenvalues"] = std::move(list);
    }
    const auto all = exact_spectrum(h);
    json list = json::array();
    std::cout << "all eigenvalues [MeV^2]:";
    for (Eigen::Index i = 0; i < all.size(); ++i) {
        std::cout << ' ' << fmt12(all(i));
        list.push_back(round12(all(i)));
    }
    std::cout << '\n';
    results["eigenvalues"] = std::move(list);
    results["mass_squared"] = json::array();
    for (Eigen::Index i = 0; i < all.size(); ++i)
        results["mass_squared"].push_back(round12(opt.total_momentum * all(i)));

    write_json(opt.json_path, json{{"meta", meta_json(opt, spec, layout)}, {"results", results}});
    maybe_export_circuit(opt, spec, layout);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_qksd(const CommonOptions& opt) {
    const auto params = opt.params();
    QksdOptions options;
    options.krylov_dim = opt.krylov_dim;
    options.eps_rel = opt.eps_rel;
    options.seed = opt.seed;
    if (opt.shots > 0) {
        options.mode = ExpectationMode::ShotSampled;
        options.shots = opt.shots;
    } else if (opt.expectations == "matrix") {
        options.mode = ExpectationMode::MatrixExact;
    } else if (opt.expectations == "matrix-spectral") {
        options.mode = ExpectationMode::MatrixExact;
        options.normalization = MatrixNormalization::Spectral;
    }
    if (!opt.pivot.empty())
        options.pivot = WeightedStates{{parse_fock_state(opt.pivot, opt.total_momentum), 1.0}};

    const auto spec = build_monomials(params);
    const auto layout = build_layout(opt.total_momentum, spec.monomial_count);

    json sectors_doc;
    for (Parity sector : requested_sectors(opt.sector)) {
        const auto result = run_qksd(params, sector, options);
        std::cout << "SA-QKSD " << to_string(sector) << " sector: pivot |" << result.pivot.front().first.to_string()
                  << ">, Krylov dimension " << result.krylov_dim << ", retained " << result.solution.retained_dim
                  << "\n  expectations:";
        for (double e : result.matrices.expectations) std::cout << ' ' << fmt12(e);
        std::cout << "\n  eigenvalues [MeV^2]:";
        for (double v : result.solution.eigenvalues) std::cout << ' ' << fmt12(v);
        std::cout << "\n  ground energy = " << fmt12(result.solution.eigenvalues.front()) << " MeV^2\n";

        json doc;
        doc["pivot"] = result.pivot.front().first.to_string();
        doc["krylov_dim"] = result.krylov_dim;
        doc["retained_dim"] = result.solution.retained_dim;
        doc["expectations"] = json::array();
        for (double e : result.matrices.expectations) doc["expectations"].push_back(round12(e));
        doc["hp"] = eigen_to_json(result.matrices.hp);
        doc["overlap"] = eigen_to_json(result.matrices.overlap);
        doc["scale"] = round12(result.matrices.scale);
        doc["shift"] = round12(result.matrices.shift);
        doc["eigenvalues"] = json::array();
        for (double v : result.solution.eigenvalues) doc["eigenvalues"].push_back(round12(v));
        if (result.qubit_count > 0) {
            doc["qubits"] = result.qubit_count;
            doc["walk_gates"] = result.walk_gate_count;
        }
        sectors_doc[to_string(sector)] = std::move(doc);
    }
    write_json(opt.json_path, json{{"meta", meta_json(opt, spec, layout)}, {"results", sectors_doc}});
    maybe_export_circuit(opt, spec, layout);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_verify(const CommonOptions& opt, int max_order, int corrupt_index) {
    auto spec = build_monomials(opt.params());
    const auto reference = build_monomials(opt.params());
    const auto layout = build_layout(opt.total_momentum, spec.monomial_count);
    const auto basis = enumerate_basis(opt.total_momentum);
    const auto h = exact_matrix(reference, basis);
    const double tolerance = 1e-10;
    bool all_pass = true;

    if (corrupt_index >= 0) {
        if (corrupt_index >= spec.monomial_count) throw std::invalid_argument("corrupt index out of range");
        spec.monomials[static_cast<std::size_t>(corrupt_index)].coefficient *= 1.01;
        std::cout << "fault injection: perturbed monomial j=" << corrupt_index << " "
                  << spec.monomials[static_cast<std::size_t>(corrupt_index)].to_string() << "\n";
    }

    // register accounting
    int qs = 0;
    for (int cap : max_occupations(opt.total_momentum)) qs += std::bit_width(static_cast<unsigned>(cap));
    const int expected_qubits = qs + opt.total_momentum + 2 + layout.id_width;
    const bool qubits_ok = layout.total_qubits == expected_qubits && layout.system_qubits == qs;
    std::cout << (qubits_ok ? "[PASS]" : "[FAIL]") << " register layout: " << layout.total_qubits << " qubits (Q_s = "
              << layout.system_qubits << ")\n";
    all_pass = all_pass && qubits_ok;

    // block-encoding identity over every basis pair
    const auto walk = walk_unitary(spec, layout);
    Eigen::MatrixXd residuals(h.rows(), h.cols());
    for (std::size_t f = 0; f < basis.size(); ++f) {
        StateVector state = init_state(layout, basis[f]);
        run(state, walk.u_h);
        for (std::size_t g = 0; g < basis.size(); ++g) {
            const auto element = state.amplitudes[state_index(basis[g], layout)];
            residuals(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)) =
                std::abs(walk.scale * element.real() - h(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)));
        }
    }
    const bool encoding_ok = residuals.maxCoeff() <= tolerance;
    std::cout << (encoding_ok ? "[PASS]" : "[FAIL]") << " block-encoding identity: max residual "
              << fmt12(residuals.maxCoeff()) << " over " << basis.size() * basis.size() << " pairs\n";
    for (std::size_t f = 0; f < basis.size(); ++f)
        for (std::size_t g = 0; g < basis.size(); ++g)
            std::cout << "    <" << basis[g].to_string() << "|.|" << basis[f].to_string() << "> residual "
                      << fmt12(residuals(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f))) << "\n";
    all_pass = all_pass && encoding_ok;

    if (!encoding_ok) {
        // localize: rebuild the walk with one monomial active at a time and
        // compare against the matching single-monomial oracle
        double worst = 0.0;
        int culprit = -1;
        for (int j = 0; j < spec.monomial_count; ++j) {
            auto probe = spec;
            for (auto& m : probe.monomials)
                if (m.index != j) m.coefficient = 0.0;
            probe.subnormalization = spec.subnormalization;  // keep the scale
            auto oracle_probe = reference;
            for (auto& m : oracle_probe.monomials)
                if (m.index != j) m.coefficient = 0.0;
            const auto probe_walk = walk_unitary(probe, layout);
            const auto oracle_single = exact_matrix(oracle_probe, basis);
            double residual = 0.0;
            for (std::size_t f = 0; f < basis.size(); ++f) {
                StateVector state = init_state(layout, basis[f]);
                run(state, probe_walk.u_h);
                for (std::size_t g = 0; g < basis.size(); ++g)
                    residual = std::max(residual,
                                        std::abs(walk.scale * state.amplitudes[state_index(basis[g], layout)].real() -
                                                 oracle_single(static_cast<Eigen::Index>(g),
                                                               static_cast<Eigen::Index>(f))));
            }
            if (residual > worst) {
                worst = residual;
                culprit = j;
            }
        }
        if (culprit >= 0)
            std::cout << "  largest single-monomial residual at monomial j=" << culprit << " "
                      << spec.monomials[static_cast<std::size_t>(culprit)].to_string() << " (" << fmt12(worst)
                      << ")\n";
    }

    // Chebyshev equivalence against the classical recurrence
    const Eigen::MatrixXd hp = h / reference.block_encoding_scale();
    const auto projected = chebyshev_projected_sweep(walk, basis, max_order);
    std::vector<Eigen::MatrixXd> recurrence(static_cast<std::size_t>(max_order) + 1);
    recurrence[0] = Eigen::MatrixXd::Identity(h.rows(), h.cols());
    if (max_order >= 1) recurrence[1] = hp;
    for (int n = 2; n <= max_order; ++n)
        recurrence[static_cast<std::size_t>(n)] =
            2.0 * hp * recurrence[static_cast<std::size_t>(n - 1)] - recurrence[static_cast<std::size_t>(n - 2)];
    json order_residuals = json::array();
    for (int n = 0; n <= max_order; ++n) {
        const double residual =
            (projected[static_cast<std::size_t>(n)] - recurrence[static_cast<std::size_t>(n)]).cwiseAbs().maxCoeff();
        const bool ok = residual <= tolerance;
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " chebyshev order " << n << ": max residual " << fmt12(residual)
                  << "\n";
        order_residuals.push_back(round12(residual));
        all_pass = all_pass && ok;
    }

    std::cout << (all_pass ? "verification passed" : "verification FAILED") << "\n";
    write_json(opt.json_path, json{{"meta", meta_json(opt, reference, layout)},
                                   {"results",
                                    {{"pass", all_pass},
                                     {"block_encoding_max_residual", round12(residuals.maxCoeff())},
                                     {"chebyshev_residuals", order_residuals},
                                     {"tolerance", tolerance}}}});
    maybe_export_circuit(opt, spec, layout);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_scan(const CommonOptions& opt, double lambda_lo, double lambda_hi, int points, double tol, int workers) {
    if (!(lambda_lo < lambda_hi)) throw CLI::ValidationError("scan", "--lambda-min must be below --lambda-max");
    if (points < 2) throw CLI::ValidationError("scan", "--points must be at least 2");
    const Parity sector = opt.sector == "even" ? Parity::Even : Parity::Odd;
    if (opt.sector == "both") throw CLI::ValidationError("scan", "pick --sector even or odd for a scan");

    std::vector<double> lambdas(static_cast<std::size_t>(points));
    std::vector<double> lowest(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        lambdas[static_cast<std::size_t>(i)] = lambda_lo + (lambda_hi - lambda_lo) * i / (points - 1);

    const int thread_count = std::max(1, std::min(workers, points));
    std::vector<std::future<void>> futures;
    for (int w = 0; w < thread_count; ++w)
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (int i = w; i < points; i += thread_count)
                lowest[static_cast<std::size_t>(i)] =
                    lowest_sector_eigenvalue(opt.total_momentum, sector, lambdas[static_cast<std::size_t>(i)], opt.m2);
        }));
    for (auto& f : futures) f.get();

    std::cout << "lambda/m^2, lowest " << to_string(sector) << "-sector eigenvalue [MeV^2]\n";
    for (int i = 0; i < points; ++i)
        std::cout << fmt12(lambdas[static_cast<std::size_t>(i)]) << ", " << fmt12(lowest[static_cast<std::size_t>(i)])
                  << "\n";

    json results;
    results["table"] = json::array();
    for (int i = 0; i < points; ++i)
        results["table"].push_back(
            {{"lambda", round12(lambdas[static_cast<std::size_t>(i)])},
             {"lowest_eigenvalue", round12(lowest[static_cast<std::size_t>(i)])}});

    const double critical = find_critical_coupling(opt.total_momentum, sector, lambda_lo, lambda_hi, tol, opt.m2);
    std::cout << "critical coupling estimate: lambda/m^2 = " << fmt12(critical) << " (tol " << fmt12(tol) << ")\n";
    results["critical_coupling"] = round12(critical);
    results["tolerance"] = round12(tol);

    if (!opt.csv_path.empty()) {
        std::ofstream csv(opt.csv_path);
        if (!csv) throw std::runtime_error("cannot write " + opt.csv_path);
        csv << "lambda_over_m2,lowest_eigenvalue\n";
        for (int i = 0; i < points; ++i)
            csv << fmt12(lambdas[static_cast<std::size_t>(i)]) << ',' << fmt12(lowest[static_cast<std::size_t>(i)])
                << '\n';
    }
    const auto spec = build_monomials(opt.params());
    const auto layout = build_layout(opt.total_momentum, spec.monomial_count);
    write_json(opt.json_path, json{{"meta", meta_json(opt, spec, layout)}, {"results", results}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"light-front phi^4 many-boson spectra via walk block encoding and Chebyshev Krylov diagonalization"};
    app.require_subcommand(1);

    CommonOptions spectrum_opt, qksd_opt, verify_opt, scan_opt;
    bool print_matrix = false;
    int max_order = 8;
    int corrupt_index = -1;
    double lambda_lo = 0.0, lambda_hi = 0.0;
    int points = 21;
    double scan_tol = 1e-3;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    auto* spectrum = app.add_subcommand("spectrum", "exact diagonalization of the fixed-K Hamiltonian");
    add_common(spectrum, spectrum_opt);
    spectrum->add_flag("--print-matrix", print_matrix, "print the Hamiltonian matrix");

    auto* qksd = app.add_subcommand("qksd", "hybrid SA-QKSD ground-state run");
    add_common(qksd, qksd_opt);

    auto* verify = app.add_subcommand("verify", "block-encoding and Chebyshev equivalence checks");
    add_common(verify, verify_opt);
    verify->add_option("--max-order", max_order, "highest Chebyshev order to certify")->check(CLI::NonNegativeNumber);
    verify->add_option("--corrupt-monomial", corrupt_index, "test hook: perturb one coefficient before verifying");

    auto* scan = app.add_subcommand("scan", "coupling scan with critical-coupling bisection");
    add_common(scan, scan_opt);
    scan->add_option("--lambda-min", lambda_lo, "bracket lower edge");
    scan->add_option("--lambda-max", lambda_hi, "bracket upper edge");
    scan->add_option("--points", points, "table resolution");
    scan->add_option("--tol", scan_tol, "bisection tolerance");
    scan->add_option("--workers", workers, "concurrent scan workers");

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto [sub, opt] : {std::pair{spectrum, &spectrum_opt}, {qksd, &qksd_opt}, {verify, &verify_opt},
                                {scan, &scan_opt}})
            if (sub->parsed() && !opt->config_path.empty()) apply_config_file(sub, opt->config_path);
        if (spectrum->parsed()) return cmd_spectrum(spectrum_opt, print_matrix);
        if (qksd->parsed()) return cmd_qksd(qksd_opt);
        if (verify->parsed()) return cmd_verify(verify_opt, max_order, corrupt_index);
        if (scan->parsed()) {
            if (scan->get_option("--lambda-min")->count() == 0 || scan->get_option("--lambda-max")->count() == 0)
                throw CLI::ValidationError("scan", "--lambda-min and --lambda-max are required (flag or config)");
            return cmd_scan(scan_opt, lambda_lo, lambda_hi, points, scan_tol, workers);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
