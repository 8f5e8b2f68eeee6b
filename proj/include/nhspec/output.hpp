#pragma once

// Deterministic tabular output: fixed 17-significant-digit numbers, '.'
// decimal point, LF line endings, independent of the process locale.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nhspec/wave_field.hpp"

namespace nhspec::cli {

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v);

std::string to_csv(const Table& table);

// Array of row objects keyed by the header.
nlohmann::json to_json(const Table& table);

// position, re_psi, im_psi, abs_psi
Table wave_table(const WaveField& wf);

// Writes bytes verbatim (binary mode). Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

}  // namespace nhspec::cli
