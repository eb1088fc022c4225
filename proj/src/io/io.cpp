#include "sgl/io/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgl/error.hpp"
#include "sgl/simd/kernels.hpp"
#include "sgl/version.hpp"

namespace sgl::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t width = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
    impl_->out.open(path);
    require(impl_->out.good(), "ParamError", "cannot open output file: " + path);
    impl_->width = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        impl_->out << header[i] << (i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
    check_invariant(values.size() == impl_->width, "csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    check_invariant(values.size() == impl_->width, "csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << values[i] << (i + 1 < values.size() ? "," : "\n");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "ParamError", "cannot open input file: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (ss.eof() && !line.empty() && line.back() == ',') fields.emplace_back();
        if (first) {
            t.header = fields;
            first = false;
        } else {
            t.rows.push_back(fields);
        }
    }
    return t;
}

la::Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "ParamError", "cannot open input file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string field;
        bool numeric = true;
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(field, &used));
                if (used != field.size()) numeric = false;
            } catch (...) {
                numeric = false;
            }
            if (!numeric) break;
        }
        if (!numeric) {
            // a single non-numeric row at the top is treated as a header
            require(rows.empty() && lineno == 1, "ParseError",
                    "non-numeric value at line " + std::to_string(lineno) + " of " + path);
            continue;
        }
        if (!rows.empty())
            require(vals.size() == rows.front().size(), "ParseError",
                    "ragged row at line " + std::to_string(lineno) + " of " + path);
        rows.push_back(std::move(vals));
    }
    require(!rows.empty(), "ParseError", "no numeric rows in " + path);
    la::Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    return m;
}

void write_matrix_csv(const std::string& path, const la::Matrix& m) {
    std::ofstream out(path);
    require(out.good(), "ParamError", "cannot open output file: " + path);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            out << format_double(m(i, j)) << (j + 1 < m.cols ? "," : "\n");
}

std::string manifest_path_for(const std::string& out_path) {
    return out_path + ".manifest.json";
}

void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const std::map<std::string, std::string>& resolved) {
    nlohmann::ordered_json j;
    j["tool"] = "sgl";
    j["version"] = sgl::kVersion;
    j["subcommand"] = subcommand;
    j["substream_mix"] = "splitmix64(seed, stream)";
    j["simd_backend"] = simd::backend_name(simd::active_backend());
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : resolved) cfg[k] = v;
    j["config"] = cfg;
    std::ofstream out(manifest_path_for(out_path));
    require(out.good(), "ParamError", "cannot open manifest for: " + out_path);
    out << j.dump(2) << "\n";
}

} // namespace sgl::io
