#include "anisomean/measure_io.hpp"

#include <fstream>
#include <sstream>

#include "anisomean/errors.hpp"
#include "anisomean/textio.hpp"
#include "json.hpp"

namespace aniso {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    require(known, errc::parse_error,
            std::string("unknown field '") + item.key() + "' in " + where);
  }
}

double number_at(const json& j, const char* what) {
  require(j.is_number(), errc::parse_error, std::string(what) + " must be a number");
  return j.get<double>();
}

Vec number_array(const json& j, const char* what) {
  require(j.is_array(), errc::parse_error, std::string(what) + " must be an array");
  Vec out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number_at(v, what));
  return out;
}

// "equispaced:<M>" -> (M, 0); "product:<P>x<A>" -> (P, A)
std::pair<long, long> parse_grid(const std::string& grid) {
  const auto colon = grid.find(':');
  require(colon != std::string::npos, errc::parse_error,
          "grid must be 'equispaced:<M>' or 'product:<P>x<A>'");
  const std::string head = grid.substr(0, colon);
  const std::string rest = grid.substr(colon + 1);
  try {
    if (head == "equispaced") return {std::stol(rest), 0};
    if (head == "product") {
      const auto x = rest.find('x');
      require(x != std::string::npos, errc::parse_error, "product grid must be '<P>x<A>'");
      return {std::stol(rest.substr(0, x)), std::stol(rest.substr(x + 1))};
    }
  } catch (const error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::parse_error, "grid counts in '" + grid + "' are not integers");
  }
  fail(errc::parse_error, "unknown grid scheme '" + head + "'");
}

}  // namespace

SpectralMeasure load_measure_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(errc::parse_error, std::string("measure JSON: ") + e.what());
  }
  require(j.is_object(), errc::parse_error, "measure JSON must be an object");
  check_keys(j, {"n", "kind", "atoms", "density"}, "measure");
  require(j.contains("n") && j["n"].is_number_integer(), errc::parse_error,
          "field 'n' must be an integer");
  const long long n_raw = j["n"].get<long long>();
  require(n_raw >= 1 && n_raw <= 16, errc::parse_error, "field 'n' out of range");
  const int n = static_cast<int>(n_raw);
  require(j.contains("kind") && j["kind"].is_string(), errc::parse_error,
          "field 'kind' must be a string");
  const std::string kind = j["kind"].get<std::string>();

  if (kind == "atomic") {
    require(j.contains("atoms"), errc::parse_error, "atomic measure needs 'atoms'");
    require(!j.contains("density"), errc::parse_error, "atomic measure cannot carry 'density'");
    const json& atoms = j["atoms"];
    require(atoms.is_array() && !atoms.empty(), errc::parse_error,
            "'atoms' must be a nonempty array");
    std::vector<Atom> list;
    list.reserve(atoms.size());
    for (const auto& entry : atoms) {
      require(entry.is_object(), errc::parse_error, "each atom must be an object");
      check_keys(entry, {"dir", "w"}, "atom");
      require(entry.contains("dir") && entry.contains("w"), errc::parse_error,
              "each atom needs 'dir' and 'w'");
      Atom atom;
      atom.dir = number_array(entry["dir"], "atom 'dir'");
      require(static_cast<int>(atom.dir.size()) == n, errc::parse_error,
              "atom 'dir' length must equal n");
      atom.weight = number_at(entry["w"], "atom 'w'");
      list.push_back(std::move(atom));
    }
    return SpectralMeasure::atomic(n, std::move(list));
  }

  if (kind == "density-grid") {
    require(j.contains("density"), errc::parse_error, "density-grid measure needs 'density'");
    require(!j.contains("atoms"), errc::parse_error, "density-grid measure cannot carry 'atoms'");
    const json& density = j["density"];
    require(density.is_object(), errc::parse_error, "'density' must be an object");
    check_keys(density, {"grid", "values"}, "density");
    require(density.contains("grid") && density["grid"].is_string(), errc::parse_error,
            "density 'grid' must be a string");
    require(density.contains("values"), errc::parse_error, "density needs 'values'");
    const std::string grid = density["grid"].get<std::string>();
    Vec values = number_array(density["values"], "density 'values'");
    const auto [p, a] = parse_grid(grid);
    if (a == 0) {
      require(n == 2, errc::parse_error, "equispaced grids are circle grids (n = 2)");
      require(p >= 1 && static_cast<long>(values.size()) == p, errc::parse_error,
              "values length must match the grid count");
      return SpectralMeasure::density_on_circle(std::move(values));
    }
    require(n == 3, errc::parse_error, "product grids are sphere grids (n = 3)");
    require(p >= 1 && a == 2 * p, errc::parse_error, "product grid needs A = 2P azimuths");
    require(static_cast<long>(values.size()) == p * a, errc::parse_error,
            "values length must match P*A");
    return SpectralMeasure::density_on_sphere(static_cast<int>(p), std::move(values));
  }

  if (kind == "uniform") {
    require(!j.contains("atoms") && !j.contains("density"), errc::parse_error,
            "uniform measure carries no nodes");
    return SpectralMeasure::uniform(n);
  }

  fail(errc::parse_error, "kind must be 'atomic', 'density-grid' or 'uniform'");
}

SpectralMeasure load_measure_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open measure file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  require(!in.bad(), errc::io_error, "cannot read measure file '" + path + "'");
  return load_measure_json(buf.str());
}

std::string save_measure_json(const SpectralMeasure& m) {
  std::string out = "{\"n\": " + std::to_string(m.dim()) + ", \"kind\": ";
  switch (m.kind()) {
    case MeasureKind::uniform:
      out += "\"uniform\"}";
      return out;
    case MeasureKind::atomic: {
      out += "\"atomic\", \"atoms\": [";
      bool first = true;
      for (const Atom& atom : m.nodes()) {
        if (!first) out += ", ";
        first = false;
        out += "{\"dir\": [";
        for (std::size_t i = 0; i < atom.dir.size(); ++i) {
          if (i) out += ", ";
          append_json_number(out, atom.dir[i]);
        }
        out += "], \"w\": ";
        append_json_number(out, atom.weight);
        out += "}";
      }
      out += "]}";
      return out;
    }
    case MeasureKind::density_grid: {
      out += "\"density-grid\", \"density\": {\"grid\": ";
      append_json_string(out, m.grid_desc());
      out += ", \"values\": [";
      const auto& values = m.density_values();
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        append_json_number(out, values[i]);
      }
      out += "]}}";
      return out;
    }
  }
  fail(errc::parse_error, "unreachable measure kind");
}

void save_measure_file(const SpectralMeasure& m, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open '" + path + "' for writing");
  out << save_measure_json(m) << '\n';
  require(out.good(), errc::io_error, "cannot write '" + path + "'");
}

}  // namespace aniso
