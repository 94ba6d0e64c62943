#include "run_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace osp::cli {

namespace fs = std::filesystem;

std::string num(double x)
{
    char b[40];
    std::snprintf(b, sizeof b, "%.15g", x);
    return b;
}

CsvWriter::CsvWriter(const fs::path& file, const std::vector<std::string>& header)
    : os_(file, std::ios::binary | std::ios::trunc)
{
    if (!os_) throw std::runtime_error("cannot write " + file.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    for (size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
    os_.flush();
}

void write_json(const fs::path& file, const json& j)
{
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << j.dump(2) << '\n';
}

json roots_json(const BetheState& s, double u, int k)
{
    json r = json::array();
    for (const auto& z : s.roots) r.push_back({z.real(), z.imag()});
    return {{"N", s.N}, {"u", u}, {"n", s.n()}, {"k", k}, {"roots", r}};
}

json zeros_json(const std::vector<cplx>& z, int m, int k, int N, double u)
{
    json r = json::array();
    for (const auto& x : z) r.push_back({x.real(), x.imag()});
    return {{"m", m}, {"k", k}, {"N", N}, {"u", u}, {"zeros", r}};
}

fs::path prepare_run_dir(const std::string& out)
{
    const fs::path dir(out);
    fs::create_directories(dir);
    const fs::path probe = dir / ".write_probe";
    {
        std::ofstream os(probe);
        if (!os) throw std::runtime_error("output directory is not writable: " + out);
    }
    fs::remove(probe);
    return dir;
}

} // namespace osp::cli
