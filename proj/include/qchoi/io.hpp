#pragma once

#include "qchoi/truncation.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace qchoi {
namespace io {

using Json = nlohmann::json;  // object keys are kept sorted

// Canonical serialization: sorted keys, all numbers printed with 17
// significant digits and a lowercase exponent, 1-space separators, newline
// terminated.  parse -> dump is byte-identical on canonical files.
std::string canonical_dump(const Json& j);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

Json matrix_to_json(const CMatrix& m);  // row-major nested arrays of [re, im]
CMatrix matrix_from_json(const Json& j);

// On-disk map/state container.
struct MapFile {
  enum class Rep { Kraus, Pairs, Choi, State };
  Rep rep = Rep::Pairs;
  Index dim = 0;  // algebra dimension for maps; unused for states
  std::optional<QuantumMap> map;
  std::optional<BipartiteOperator> state;
  std::string name;
  std::optional<std::uint64_t> seed;
};

MapFile parse_map_file(const std::string& text);
std::string serialize(const MapFile& f);

MapFile from_map(const QuantumMap& m, MapFile::Rep rep, const std::string& name);
MapFile from_state(const BipartiteOperator& s, const std::string& name);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// x0 specifications accepted by the CLI: "mes", "diag:p=<real>", or a path
// to a JSON file {"matrix": ..., "normalized": bool}.
CyclicVector parse_x0_spec(const std::string& spec, Index dim);

}  // namespace io
}  // namespace qchoi
