#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "speclab/field.hpp"
#include "speclab/json_out.hpp"

namespace speclab {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts are unsupported");

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// On-disk format: <path>.field is a JSON manifest
//   {"grid":{"n":N,"length":L},"shape":[r,c],"dtype":"f64-le","data":"<rel>"}
// and the samples live in a raw little-endian float64 file next to it,
// grid-major then row-major within each block (the Field memory layout).

inline void save_field(const Field& f, const std::filesystem::path& manifest_path) {
    require_finite(f, "save_field");
    std::filesystem::path data_path = manifest_path;
    data_path.replace_extension(".bin");

    json manifest;
    manifest["grid"] = {{"n", f.grid.n}, {"length", f.grid.length}};
    manifest["shape"] = {f.rows, f.cols};
    manifest["dtype"] = "f64-le";
    manifest["data"] = data_path.filename().string();

    std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
    if (!mf) throw IoError("save_field: cannot open " + manifest_path.string());
    mf << dump17(manifest);
    if (!mf) throw IoError("save_field: write failed for " + manifest_path.string());

    std::ofstream df(data_path, std::ios::binary | std::ios::trunc);
    if (!df) throw IoError("save_field: cannot open " + data_path.string());
    df.write(reinterpret_cast<const char*>(f.data.data()),
             static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!df) throw IoError("save_field: write failed for " + data_path.string());
}

inline Field load_field(const std::filesystem::path& manifest_path) {
    std::ifstream mf(manifest_path, std::ios::binary);
    if (!mf) throw IoError("load_field: cannot open " + manifest_path.string());

    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_field: bad manifest " + manifest_path.string() + ": " + e.what());
    }

    Field f;
    try {
        const auto& grid = manifest.at("grid");
        f.grid = Grid1D::make(grid.at("n").get<int>(), grid.at("length").get<double>());
        const auto& shape = manifest.at("shape");
        if (!shape.is_array() || shape.size() != 2)
            throw IoError("load_field: shape must be [rows, cols]");
        f.rows = shape.at(0).get<int>();
        f.cols = shape.at(1).get<int>();
        if (f.rows < 1 || f.cols < 1) throw IoError("load_field: non-positive shape");
        if (manifest.at("dtype").get<std::string>() != "f64-le")
            throw IoError("load_field: unsupported dtype in " + manifest_path.string());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_field: bad manifest " + manifest_path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError("load_field: bad manifest " + manifest_path.string() + ": " + e.what());
    }

    const auto data_path = manifest_path.parent_path() / manifest.at("data").get<std::string>();
    std::ifstream df(data_path, std::ios::binary);
    if (!df) throw IoError("load_field: cannot open " + data_path.string());
    const std::size_t count = static_cast<std::size_t>(f.grid.n) * f.rows * f.cols;
    f.data.resize(count);
    df.read(reinterpret_cast<char*>(f.data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(df.gcount()) != count * sizeof(double))
        throw IoError("load_field: short read from " + data_path.string());
    char extra;
    if (df.read(&extra, 1))
        throw IoError("load_field: trailing bytes in " + data_path.string());

    try {
        require_finite(f, "load_field");
    } catch (const std::invalid_argument& e) {
        throw IoError(e.what());
    }
    return f;
}

} // namespace speclab
