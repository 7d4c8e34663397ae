#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crl/preprocess.hpp"
#include "crl/rng.hpp"

namespace testutil {

// Self-cleaning scratch directory under the system temp root.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("crl-" + tag + "-" + std::to_string(counter.fetch_add(1)) + "-" +
                 std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xFFFFF));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Random design matrix with entries in [0,1] and random binary labels.
inline crl::DesignMatrix random_matrix(crl::Rng& rng, std::size_t rows, std::size_t cols) {
    crl::DesignMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.values.resize(rows * cols);
    m.labels.resize(rows);
    for (auto& v : m.values) v = rng.uniform01();
    for (auto& y : m.labels) y = rng.bernoulli(0.5) ? 1 : 0;
    for (std::size_t c = 0; c < cols; ++c) m.column_names.push_back("f" + std::to_string(c));
    return m;
}

// Matrix built from explicit row data.
inline crl::DesignMatrix make_matrix(std::size_t cols, const std::vector<double>& values,
                                     const std::vector<std::uint8_t>& labels) {
    crl::DesignMatrix m;
    m.cols = cols;
    m.rows = labels.size();
    m.values = values;
    m.labels = labels;
    for (std::size_t c = 0; c < cols; ++c) m.column_names.push_back("f" + std::to_string(c));
    return m;
}

} // namespace testutil
