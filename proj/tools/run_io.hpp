#pragma once

#include "osp/bae.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace osp::cli {

using json = nlohmann::json;

// Fixed-format number, identical bytes across runs.
std::string num(double x);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream os_;
};

void write_json(const std::filesystem::path& file, const json& j);

json roots_json(const BetheState& s, double u, int k);
json zeros_json(const std::vector<cplx>& z, int m, int k, int N, double u);

// Creates the run directory, failing early if it cannot be written.
std::filesystem::path prepare_run_dir(const std::string& out);

} // namespace osp::cli
