#include "flare/dataset.hpp"

#include "flare/error.hpp"
#include "flare/kb_io.hpp"

namespace flare {

std::vector<Vector> parse_examples(const Schema& schema, AttrIndex target, std::string_view csv) {
  std::vector<Vector> out;
  const auto rows = text::lines(csv);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t row = k + 1;
    const auto line = rows[k];
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != schema.arity())
      throw ParseError("expected " + std::to_string(schema.arity()) + " fields, found " +
                           std::to_string(fields.size()),
                       row);
    Vector v;
    v.target = target;
    v.cells.resize(schema.arity());
    for (AttrIndex i = 0; i < fields.size(); ++i) {
      const auto f = text::trim(fields[i]);
      const auto col = text::column_of(line, fields[i]);
      if (f.empty()) throw ParseError("empty field", row, col);
      if (f == "*") throw ParseError("examples cannot contain don't-care cells", row, col);
      if (i == target && f == "?") throw ParseError("missing target value", row, col);
      v[i] = parse_cell(schema[i], f, row, col);
    }
    out.push_back(std::move(v));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& schema_path, const std::filesystem::path& data_path) {
  auto spec = parse_schema(read_file(schema_path));
  if (!spec.target) throw ParseError(schema_path.string() + ": schema file does not name a target", 0);
  Dataset d;
  d.schema = spec.schema;
  d.target = *spec.target;
  if (!d.schema[d.target].is_nominal()) throw SchemaMismatch("dataset target must be nominal");
  d.examples = parse_examples(d.schema, d.target, read_file(data_path));
  return d;
}

Dataset load_dataset(const std::filesystem::path& base) {
  auto schema = base;
  auto data = base;
  schema += ".schema";
  data += ".csv";
  return load_dataset(schema, data);
}

}  // namespace flare
