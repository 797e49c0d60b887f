#include "curator/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "curator/error.hpp"

namespace curator {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string required_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw LineError(ErrorCode::ManifestSemantic, line, std::string("missing required field '") + key + "'");
  }
  if (!it->is_string()) {
    throw LineError(ErrorCode::ManifestSemantic, line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw LineError(ErrorCode::ManifestSemantic, line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<Timestamp14> optional_timestamp(const json& obj, const char* key, std::size_t line) {
  auto raw = optional_string(obj, key, line);
  if (raw.empty()) return std::nullopt;
  try {
    return Timestamp14::parse(raw);
  } catch (const Error& e) {
    throw LineError(ErrorCode::ManifestSemantic, line, std::string(key) + ": " + e.what());
  }
}

json parse_line(std::string_view text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception& e) {
    throw LineError(ErrorCode::ManifestSyntax, line, e.what());
  }
  if (!obj.is_object()) throw LineError(ErrorCode::ManifestSyntax, line, "expected a JSON object");
  return obj;
}

}  // namespace

CollectionManifest parse_manifest(std::string_view bytes) {
  CollectionManifest m;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    auto text = bytes.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.find_first_not_of(" \t") == std::string_view::npos) continue;

    json obj = parse_line(text, line_no);
    if (!have_header) {
      m.collection_id = required_string(obj, "collectionId", line_no);
      m.title = required_string(obj, "title", line_no);
      m.description = optional_string(obj, "description", line_no);
      m.collector_name = required_string(obj, "collectorName", line_no);
      if (m.collection_id.empty()) throw LineError(ErrorCode::ManifestSemantic, line_no, "empty collectionId");
      have_header = true;
      continue;
    }

    SeedRecord seed;
    seed.line = line_no;
    seed.url = required_string(obj, "url", line_no);
    seed.title = optional_string(obj, "title", line_no);
    seed.description = optional_string(obj, "description", line_no);
    seed.author = optional_string(obj, "author", line_no);
    if (auto it = obj.find("subjects"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) throw LineError(ErrorCode::ManifestSemantic, line_no, "subjects must be an array");
      for (const auto& s : *it) {
        if (!s.is_string()) throw LineError(ErrorCode::ManifestSemantic, line_no, "subjects must be strings");
        seed.subjects.push_back(s.get<std::string>());
      }
    }
    seed.first_capture = optional_timestamp(obj, "firstCapture", line_no);
    seed.last_capture = optional_timestamp(obj, "lastCapture", line_no);
    if (seed.first_capture && seed.last_capture && *seed.last_capture < *seed.first_capture) {
      throw LineError(ErrorCode::ManifestSemantic, line_no, "lastCapture precedes firstCapture");
    }
    m.seeds.push_back(std::move(seed));
  }
  if (!have_header) throw LineError(ErrorCode::ManifestSyntax, line_no == 0 ? 1 : line_no, "missing header line");
  return m;
}

std::string format_manifest(const CollectionManifest& m) {
  std::string out;
  ordered_json header;
  header["collectionId"] = m.collection_id;
  header["title"] = m.title;
  header["description"] = m.description;
  header["collectorName"] = m.collector_name;
  out += header.dump();
  out += '\n';
  for (const auto& s : m.seeds) {
    ordered_json seed;
    seed["url"] = s.url;
    seed["title"] = s.title;
    seed["description"] = s.description;
    seed["author"] = s.author;
    seed["subjects"] = s.subjects;
    if (s.first_capture) seed["firstCapture"] = s.first_capture->str();
    if (s.last_capture) seed["lastCapture"] = s.last_capture->str();
    out += seed.dump();
    out += '\n';
  }
  return out;
}

CollectionManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open manifest", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str());
}

}  // namespace curator
