#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nl0r/problems.hpp"

namespace nl0r {

namespace {

using nlohmann::json;

json row_major(const Matrix& a) {
  json out = json::array();
  out.get_ref<json::array_t&>().reserve(static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out.push_back(a(i, j));
  }
  return out;
}

json to_array(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector read_vector(const json& doc, const char* key, Index expected) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw InstanceFormatError(std::string("instance: missing array '") + key + "'");
  }
  const auto& arr = doc[key];
  if (static_cast<Index>(arr.size()) != expected) {
    throw InstanceFormatError(std::string("instance: '") + key + "' has wrong length");
  }
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const auto& e = arr[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw InstanceFormatError(std::string("instance: non-numeric entry in '") + key + "'");
    v[i] = e.get<double>();
  }
  return v;
}

Matrix read_matrix(const json& doc, const char* key, Index rows, Index cols) {
  const Vector flat = read_vector(doc, key, rows * cols);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = flat[i * cols + j];
  }
  return a;
}

Index read_size(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw InstanceFormatError(std::string("instance: missing integer '") + key + "'");
  }
  const auto v = doc[key].get<long long>();
  if (v < 0) throw InstanceFormatError(std::string("instance: negative '") + key + "'");
  return static_cast<Index>(v);
}

}  // namespace

std::string instance_to_json(const ProblemInstance& inst) {
  json doc;
  doc["format_version"] = kInstanceFormatVersion;
  if (const auto* cs = std::get_if<CsInstance>(&inst)) {
    doc["kind"] = "cs";
    doc["n"] = cs->n();
    doc["m"] = cs->m();
    doc["s_star"] = cs->s_star;
    doc["seed"] = cs->seed;
    doc["noise_factor"] = cs->noise_factor;
    doc["A"] = row_major(cs->a);
    doc["y"] = to_array(cs->y);
    doc["x_star"] = to_array(cs->x_star);
  } else {
    const auto& lcp = std::get<LcpInstance>(inst);
    doc["kind"] = "lcp";
    doc["n"] = lcp.n();
    doc["m"] = lcp.rank;
    doc["s_star"] = lcp.s_star;
    doc["seed"] = lcp.seed;
    doc["M"] = row_major(lcp.m_mat);
    doc["q"] = to_array(lcp.q);
    doc["x_star"] = to_array(lcp.x_star);
  }
  return doc.dump();
}

ProblemInstance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceFormatError(std::string("instance: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InstanceFormatError("instance: expected a JSON object");
  if (!doc.contains("format_version") || doc["format_version"] != kInstanceFormatVersion) {
    throw InstanceFormatError("instance: unsupported format_version");
  }
  const std::string kind = doc.value("kind", "");
  const Index n = read_size(doc, "n");
  const Index m = read_size(doc, "m");
  const Index s = read_size(doc, "s_star");
  if (n < 1 || m < 1) throw InstanceFormatError("instance: n and m must be positive");
  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned()) {
    throw InstanceFormatError("instance: missing unsigned 'seed'");
  }
  const auto seed = doc["seed"].get<std::uint64_t>();

  if (kind == "cs") {
    CsInstance cs;
    cs.a = read_matrix(doc, "A", m, n);
    cs.y = read_vector(doc, "y", m);
    cs.x_star = read_vector(doc, "x_star", n);
    cs.s_star = s;
    cs.seed = seed;
    cs.noise_factor = doc.value("noise_factor", 0.0);
    if (!cs.a.allFinite() || !all_finite(cs.y) || !all_finite(cs.x_star)) {
      throw InstanceFormatError("instance: non-finite data");
    }
    return cs;
  }
  if (kind == "lcp") {
    LcpInstance lcp;
    lcp.m_mat = read_matrix(doc, "M", n, n);
    lcp.q = read_vector(doc, "q", n);
    lcp.x_star = read_vector(doc, "x_star", n);
    lcp.rank = m;
    lcp.s_star = s;
    lcp.seed = seed;
    if (!lcp.m_mat.allFinite() || !all_finite(lcp.q) || !all_finite(lcp.x_star)) {
      throw InstanceFormatError("instance: non-finite data");
    }
    if ((lcp.m_mat - lcp.m_mat.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + lcp.m_mat.cwiseAbs().maxCoeff())) {
      throw InstanceFormatError("instance: M is not symmetric");
    }
    if (!check_omega(lcp.m_mat, lcp.q, lcp.x_star).ok(1e-10)) {
      throw InstanceFormatError("instance: x_star violates the complementarity conditions");
    }
    return lcp;
  }
  throw InstanceFormatError("instance: unknown kind '" + kind + "'");
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << instance_to_json(inst) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

}  // namespace nl0r
