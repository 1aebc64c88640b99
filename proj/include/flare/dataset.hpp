#pragma once

// Comma-separated example files described by a schema file.

#include <filesystem>
#include <string_view>
#include <vector>

#include "flare/model.hpp"

namespace flare {

struct Dataset {
  Schema schema;
  AttrIndex target = 0;
  std::vector<Vector> examples;
};

/// One example per non-empty row; `?` marks a missing value. Throws
/// ParseError (row/column) or DomainError.
std::vector<Vector> parse_examples(const Schema& schema, AttrIndex target, std::string_view csv);

/// The schema file must name its target with `target = <attribute>`.
Dataset load_dataset(const std::filesystem::path& schema_path, const std::filesystem::path& data_path);

/// `base` may be a path without extension: `base.schema` and `base.csv`.
Dataset load_dataset(const std::filesystem::path& base);

}  // namespace flare
