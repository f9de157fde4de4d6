#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "band_metric.hpp"
#include "metric_recur.hpp"
#include "penta.hpp"
#include "polyfam.hpp"

namespace cryptoherm {

inline constexpr int matrix_file_format_version = 1;

enum class MatrixKind { tridiagonal_hamiltonian, pentadiagonal_hamiltonian, symmetric_band_metric, dense };

inline std::string to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::tridiagonal_hamiltonian: return "tridiagonal-hamiltonian";
        case MatrixKind::pentadiagonal_hamiltonian: return "pentadiagonal-hamiltonian";
        case MatrixKind::symmetric_band_metric: return "symmetric-band-metric";
        case MatrixKind::dense: return "dense";
    }
    throw std::invalid_argument("to_string: unknown MatrixKind");
}

inline MatrixKind matrix_kind_from_string(const std::string& s) {
    if (s == "tridiagonal-hamiltonian") return MatrixKind::tridiagonal_hamiltonian;
    if (s == "pentadiagonal-hamiltonian") return MatrixKind::pentadiagonal_hamiltonian;
    if (s == "symmetric-band-metric") return MatrixKind::symmetric_band_metric;
    if (s == "dense") return MatrixKind::dense;
    throw std::invalid_argument("matrix_kind_from_string: unknown kind '" + s + "'");
}

/// One matrix plus free-form metadata (family tag, parameters, seeds, ...).
/// Serialized as JSON with named diagonal arrays, so files are readable and
/// self-describing; doubles round-trip exactly through the shortest decimal
/// representation.
struct MatrixFile {
    MatrixKind kind = MatrixKind::dense;
    std::variant<TridiagonalHamiltonian, PentaHamiltonian, SymmetricBandMetric, Eigen::MatrixXd>
        payload;
    nlohmann::json metadata;  // may stay null

    MatrixFile() : payload(Eigen::MatrixXd()) {}
    MatrixFile(MatrixKind k,
               std::variant<TridiagonalHamiltonian, PentaHamiltonian, SymmetricBandMetric,
                            Eigen::MatrixXd>
                   p,
               nlohmann::json meta = nullptr)
        : kind(k), payload(std::move(p)), metadata(std::move(meta)) {}
};

namespace detail {

inline std::vector<double> json_array(const nlohmann::json& j, const std::string& key,
                                      std::size_t expected) {
    if (!j.contains(key) || !j[key].is_array())
        throw std::invalid_argument("matrix file: missing array '" + key + "'");
    std::vector<double> v;
    v.reserve(j[key].size());
    for (const auto& x : j[key]) {
        if (!x.is_number())
            throw std::invalid_argument("matrix file: non-numeric entry in '" + key + "'");
        v.push_back(x.get<double>());
    }
    if (v.size() != expected)
        throw std::invalid_argument("matrix file: '" + key + "' has length " +
                                    std::to_string(v.size()) + ", expected " +
                                    std::to_string(expected));
    return v;
}

} // namespace detail

inline nlohmann::json to_json(const MatrixFile& file) {
    nlohmann::json j;
    j["format_version"] = matrix_file_format_version;
    j["kind"] = to_string(file.kind);
    nlohmann::json payload;
    std::size_t n = 0;
    switch (file.kind) {
        case MatrixKind::tridiagonal_hamiltonian: {
            const auto& h = std::get<TridiagonalHamiltonian>(file.payload);
            n = h.size();
            payload["diagonal"] = h.diag;
            payload["super"] = h.super;
            payload["sub"] = h.sub;
            break;
        }
        case MatrixKind::pentadiagonal_hamiltonian: {
            const auto& h = std::get<PentaHamiltonian>(file.payload);
            n = h.size();
            if (!h.diag.empty()) payload["diagonal"] = h.diag;
            payload["super1"] = h.super1;
            payload["sub1"] = h.sub1;
            payload["super2"] = h.super2;
            payload["sub2"] = h.sub2;
            break;
        }
        case MatrixKind::symmetric_band_metric: {
            const auto& m = std::get<SymmetricBandMetric>(file.payload);
            n = m.size();
            j["bandwidth"] = m.bandwidth();
            for (std::size_t d = 0; d <= m.bandwidth(); ++d)
                payload["diag" + std::to_string(d)] = m.diagonal(d);
            break;
        }
        case MatrixKind::dense: {
            const auto& m = std::get<Eigen::MatrixXd>(file.payload);
            if (m.rows() != m.cols())
                throw std::invalid_argument("to_json: dense matrix must be square");
            n = static_cast<std::size_t>(m.rows());
            std::vector<double> entries;
            entries.reserve(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t c = 0; c < n; ++c) entries.push_back(m(i, c));
            payload["entries"] = entries;
            break;
        }
    }
    j["n"] = n;
    j["payload"] = payload;
    if (!file.metadata.is_null()) j["metadata"] = file.metadata;
    return j;
}

inline MatrixFile matrix_file_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw std::invalid_argument("matrix file: root must be an object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != matrix_file_format_version)
        throw std::invalid_argument("matrix file: unsupported format_version");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("matrix file: missing kind");
    if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0)
        throw std::invalid_argument("matrix file: n must be a positive integer");
    if (!j.contains("payload") || !j["payload"].is_object())
        throw std::invalid_argument("matrix file: missing payload");

    const MatrixKind kind = matrix_kind_from_string(j["kind"].get<std::string>());
    const std::size_t n = j["n"].get<std::size_t>();
    const nlohmann::json& payload = j["payload"];

    MatrixFile file;
    file.kind = kind;
    file.metadata = j.contains("metadata") ? j["metadata"] : nlohmann::json(nullptr);
    switch (kind) {
        case MatrixKind::tridiagonal_hamiltonian: {
            TridiagonalHamiltonian h;
            h.diag = detail::json_array(payload, "diagonal", n);
            h.super = detail::json_array(payload, "super", n - 1);
            h.sub = detail::json_array(payload, "sub", n - 1);
            file.payload = std::move(h);
            break;
        }
        case MatrixKind::pentadiagonal_hamiltonian: {
            if (n < 3)
                throw std::invalid_argument("matrix file: pentadiagonal kind needs n >= 3");
            PentaHamiltonian h;
            if (payload.contains("diagonal"))
                h.diag = detail::json_array(payload, "diagonal", n);
            h.super1 = detail::json_array(payload, "super1", n - 1);
            h.sub1 = detail::json_array(payload, "sub1", n - 1);
            h.super2 = detail::json_array(payload, "super2", n - 2);
            h.sub2 = detail::json_array(payload, "sub2", n - 2);
            file.payload = std::move(h);
            break;
        }
        case MatrixKind::symmetric_band_metric: {
            if (!j.contains("bandwidth") || !j["bandwidth"].is_number_unsigned())
                throw std::invalid_argument("matrix file: band metric needs a bandwidth field");
            const std::size_t k = j["bandwidth"].get<std::size_t>();
            if (k >= n)
                throw std::invalid_argument("matrix file: bandwidth must be at most n-1");
            std::vector<std::vector<double>> diagonals;
            for (std::size_t d = 0; d <= k; ++d)
                diagonals.push_back(detail::json_array(payload, "diag" + std::to_string(d), n - d));
            file.payload = SymmetricBandMetric::from_diagonals(std::move(diagonals));
            break;
        }
        case MatrixKind::dense: {
            const std::vector<double> entries = detail::json_array(payload, "entries", n * n);
            Eigen::MatrixXd m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t c = 0; c < n; ++c) m(i, c) = entries[i * n + c];
            file.payload = std::move(m);
            break;
        }
    }
    return file;
}

inline void write_matrix_file(const std::filesystem::path& path, const MatrixFile& file) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("write_matrix_file: cannot open '" + path.string() + "'");
    out << to_json(file).dump(2) << '\n';
    if (!out)
        throw std::invalid_argument("write_matrix_file: write to '" + path.string() + "' failed");
}

inline MatrixFile read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("read_matrix_file: cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("read_matrix_file: '" + path.string() + "' is not valid JSON (" +
                                    e.what() + ")");
    }
    return matrix_file_from_json(j);
}

/// Everything a verification run measures about a (H, Theta) pair.
struct VerifyReport {
    double residual = 0.0;
    double relative_residual = 0.0;
    double min_eigenvalue = 0.0;
    std::size_t null_space_dimension = 0;
    std::optional<std::vector<double>> kappa;
    bool pass = false;
};

inline nlohmann::json to_json(const VerifyReport& report) {
    nlohmann::json j;
    j["format_version"] = matrix_file_format_version;
    j["residual"] = report.residual;
    j["relative_residual"] = report.relative_residual;
    j["min_eigenvalue"] = report.min_eigenvalue;
    j["null_space_dimension"] = report.null_space_dimension;
    if (report.kappa) j["kappa"] = *report.kappa;
    j["pass"] = report.pass;
    return j;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw std::invalid_argument("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

} // namespace detail

inline void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "index,energy\n";
    for (std::size_t i = 0; i < spectrum.energies.size(); ++i)
        out << i << ',' << detail::format_double(spectrum.energies[i]) << '\n';
}

inline void write_scan_csv(std::ostream& out, const PositivityScan& scan) {
    out << "alpha,beta,min_eig\n";
    for (std::size_t ia = 0; ia < scan.alphas.size(); ++ia)
        for (std::size_t ib = 0; ib < scan.betas.size(); ++ib)
            out << detail::format_double(scan.alphas[ia]) << ','
                << detail::format_double(scan.betas[ib]) << ','
                << detail::format_double(scan.min_eigenvalues[ia * scan.betas.size() + ib])
                << '\n';
}

} // namespace cryptoherm
