#include "qchoi/io.hpp"

#include "qchoi/generators.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qchoi {
namespace io {

namespace {

void format_number(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void dump_rec(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        out += Json(it.key()).dump();
        out += ": ";
        dump_rec(out, it.value());
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump_rec(out, j[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      format_number(out, j.get<double>());
      break;
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_rec(out, j);
  out += '\n';
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected nonempty array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (Index c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<size_t>(c)];
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("matrix: entry is not [re, im]");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

namespace {

std::string rep_name(MapFile::Rep rep) {
  switch (rep) {
    case MapFile::Rep::Kraus: return "kraus";
    case MapFile::Rep::Pairs: return "pairs";
    case MapFile::Rep::Choi: return "choi";
    case MapFile::Rep::State: return "state";
  }
  return "pairs";
}

MapFile::Rep rep_from_name(const std::string& s) {
  if (s == "kraus") return MapFile::Rep::Kraus;
  if (s == "pairs") return MapFile::Rep::Pairs;
  if (s == "choi") return MapFile::Rep::Choi;
  if (s == "state") return MapFile::Rep::State;
  throw std::invalid_argument("unknown rep: " + s);
}

}  // namespace

MapFile parse_map_file(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("json parse error: ") + e.what());
  }
  MapFile f;
  if (!j.contains("rep") || !j.contains("payload"))
    throw std::invalid_argument("map file: missing rep/payload");
  f.rep = rep_from_name(j["rep"].get<std::string>());
  if (j.contains("metadata")) {
    const Json& meta = j["metadata"];
    if (meta.contains("name")) f.name = meta["name"].get<std::string>();
    if (meta.contains("seed")) f.seed = meta["seed"].get<std::uint64_t>();
  }

  if (f.rep == MapFile::Rep::State) {
    if (!j.contains("dims")) throw std::invalid_argument("state file: missing dims");
    const Index d1 = j["dims"][0].get<Index>();
    const Index d2 = j["dims"][1].get<Index>();
    CMatrix m = matrix_from_json(j["payload"]);
    f.state = BipartiteOperator(d1, d2, std::move(m));
    f.dim = d1;
    return f;
  }

  if (!j.contains("dim")) throw std::invalid_argument("map file: missing dim");
  f.dim = j["dim"].get<Index>();
  if (f.dim <= 0) throw std::invalid_argument("map file: dim must be positive");

  switch (f.rep) {
    case MapFile::Rep::Kraus: {
      std::vector<KrausPair> pairs;
      for (const Json& vj : j["payload"]) {
        CMatrix v = matrix_from_json(vj);
        pairs.push_back({v.adjoint(), v});
      }
      f.map = QuantumMap(f.dim, std::move(pairs));
      break;
    }
    case MapFile::Rep::Pairs: {
      std::vector<KrausPair> pairs;
      for (const Json& pj : j["payload"]) {
        if (!pj.is_array() || pj.size() != 2)
          throw std::invalid_argument("pairs payload: expected [a, b] entries");
        pairs.push_back({matrix_from_json(pj[0]), matrix_from_json(pj[1])});
      }
      f.map = QuantumMap(f.dim, std::move(pairs));
      break;
    }
    case MapFile::Rep::Choi: {
      CMatrix c = matrix_from_json(j["payload"]);
      if (c.rows() != f.dim * f.dim)
        throw std::invalid_argument("choi payload: size does not match dim^2");
      f.map = map_from_std_choi(BipartiteOperator(f.dim, f.dim, std::move(c)));
      break;
    }
    default:
      break;
  }
  return f;
}

std::string serialize(const MapFile& f) {
  Json j;
  j["rep"] = rep_name(f.rep);
  if (!f.name.empty() || f.seed) {
    Json meta = Json::object();
    if (!f.name.empty()) meta["name"] = f.name;
    if (f.seed) meta["seed"] = *f.seed;
    j["metadata"] = std::move(meta);
  }
  if (f.rep == MapFile::Rep::State) {
    j["dims"] = Json::array({f.state->dim_first, f.state->dim_second});
    j["payload"] = matrix_to_json(f.state->mat);
    return canonical_dump(j);
  }
  j["dim"] = f.dim;
  switch (f.rep) {
    case MapFile::Rep::Kraus: {
      Json payload = Json::array();
      for (const auto& p : f.map->pairs()) payload.push_back(matrix_to_json(p.b));
      j["payload"] = std::move(payload);
      break;
    }
    case MapFile::Rep::Pairs: {
      Json payload = Json::array();
      for (const auto& p : f.map->pairs())
        payload.push_back(Json::array({matrix_to_json(p.a), matrix_to_json(p.b)}));
      j["payload"] = std::move(payload);
      break;
    }
    case MapFile::Rep::Choi:
      j["payload"] = matrix_to_json(std_choi(*f.map).mat);
      break;
    default:
      break;
  }
  return canonical_dump(j);
}

MapFile from_map(const QuantumMap& m, MapFile::Rep rep, const std::string& name) {
  MapFile f;
  f.rep = rep;
  f.dim = m.dim();
  f.map = m;
  f.name = name;
  if (rep == MapFile::Rep::Kraus) {
    // Only exact when every pair is (V^dag, V).
    for (const auto& p : m.pairs())
      if (max_abs(p.a - CMatrix(p.b.adjoint())) > kHermTol * (1.0 + max_abs(p.b)))
        throw std::invalid_argument("from_map: pairs are not in Kraus form");
  }
  return f;
}

MapFile from_state(const BipartiteOperator& s, const std::string& name) {
  MapFile f;
  f.rep = MapFile::Rep::State;
  f.state = s;
  f.dim = s.dim_first;
  f.name = name;
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

CyclicVector parse_x0_spec(const std::string& spec, Index dim) {
  if (spec.empty() || spec == "mes") return CyclicVector::maximally_entangled(dim);
  if (spec.rfind("diag:p=", 0) == 0) {
    const double p = std::stod(spec.substr(7));
    return diag_cyclic(dim, p, true);
  }
  const Json j = Json::parse(read_file(spec));
  if (!j.contains("matrix")) throw std::invalid_argument("x0 file: missing matrix");
  CMatrix m = matrix_from_json(j["matrix"]);
  if (m.rows() != dim) throw std::invalid_argument("x0 file: dimension mismatch");
  const bool normalize = j.value("normalized", true);
  return CyclicVector::make(std::move(m), normalize);
}

}  // namespace io
}  // namespace qchoi
