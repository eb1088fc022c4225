#pragma once

#include <map>
#include <string>
#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::io {

// %.17g formatting so that written doubles round-trip and identical runs
// produce byte-identical files.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);

private:
    struct Impl;
    Impl* impl_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

// Dense numeric matrix from a headerless (or single-header) CSV.
la::Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const la::Matrix& m);

// Run manifest: resolved configuration echo, artifact version, backend and
// substream scheme. No timestamps: identical runs must produce identical
// bytes.
void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const std::map<std::string, std::string>& resolved);

std::string manifest_path_for(const std::string& out_path);

} // namespace sgl::io
