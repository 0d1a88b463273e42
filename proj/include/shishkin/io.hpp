#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "shishkin/dyadic.hpp"
#include "shishkin/errors.hpp"
#include "shishkin/experiments.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/norms.hpp"
#include "shishkin/operators.hpp"

namespace shishkin {

/// Writes via a sibling temp file and a rename, so readers never see a
/// truncated file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

/// log2 of a dyadic parameter, or the plain value otherwise. mu = 0 prints 0.
inline std::string exponent_field(double v) {
    if (auto k = dyadic_exponent(v)) return std::to_string(*k);
    return format_real(v);
}

inline std::string mesh_csv(const Mesh& m) {
    std::string s = "index,x,h\n";
    for (int i = 0; i <= m.n(); ++i)
        s += std::to_string(i) + "," + format_real(m.x(i)) + "," + (i == 0 ? std::string() : format_real(m.h(i))) + "\n";
    return s;
}

inline std::string solution_csv(const MeshFunction& u) {
    std::string s = "index,x,U\n";
    for (int i = 0; i <= u.n(); ++i) s += std::to_string(i) + "," + format_real(u.mesh->x(i)) + "," + format_real(u[i]) + "\n";
    return s;
}

inline std::string records_csv(const std::vector<ErrorRecord>& records) {
    std::string s = "eps_exponent,mu_exponent,n,e_total,e_sup,e_flux,flux_left,flux_mid,flux_right\n";
    for (const auto& r : records) {
        s += exponent_field(r.eps) + "," + exponent_field(r.mu) + "," + std::to_string(r.n) + "," + format_real(r.e_total) +
             "," + format_real(r.e_sup) + "," + format_real(r.e_flux);
        for (double f : r.nodal_flux_by_region) s += "," + format_real(f);
        s += "\n";
    }
    return s;
}

namespace detail {

inline std::string md_header(const std::string& corner, const std::vector<int>& ns) {
    std::string s = "| " + corner + " |";
    std::string rule = "|---|";
    for (int n : ns) {
        s += " " + std::to_string(n) + " |";
        rule += "---|";
    }
    return s + "\n" + rule + "\n";
}

inline std::string md_rows(const std::vector<TableRow>& rows) {
    std::string s;
    for (const auto& row : rows) {
        s += "| " + format_param(row.param) + " |";
        for (double v : row.values) s += " " + format_sci(v) + " |";
        s += "\n";
    }
    return s;
}

}  // namespace detail

inline std::string table1_md(const SweepResult& r, double mu) {
    return "Computed global errors E^N_{eps,mu} for mu = " + format_param(mu) + "\n\n" + detail::md_header("eps / N", r.n_set) +
           detail::md_rows(r.table1);
}

inline std::string table2_md(const SweepResult& r) {
    return "Computed maximum global errors over eps\n\n" + detail::md_header("mu / N", r.n_set) + detail::md_rows(r.table2);
}

inline std::string table3_md(const SweepResult& r) {
    std::vector<int> ns;
    for (std::size_t k = 0; k + 1 < r.table3.size(); ++k) ns.push_back(r.table3[k].n);
    std::string s = "Computed orders of parameter-uniform convergence\n\n" + detail::md_header("N", ns) + "| p^N |";
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const auto& p = r.table3[k].p;
        s += " " + (p ? format_fixed(*p, 2) : std::string("-")) + " |";
    }
    return s + "\n";
}

inline std::string figure_csv(const std::vector<std::pair<double, double>>& pts) {
    std::string s = "x,u\n";
    for (const auto& [x, u] : pts) s += format_real(x) + "," + format_real(u) + "\n";
    return s;
}

}  // namespace shishkin
