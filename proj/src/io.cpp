#include "dict2wic/io.hpp"

#include <fstream>
#include <iterator>

#include "dict2wic/errors.hpp"

namespace dict2wic::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("io_error", "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void for_each_line(
    std::string_view content,
    const std::function<void(std::size_t, std::string_view)>& fn) {
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    fn(number, line);
  }
}

void for_each_json_line(
    std::string_view content,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  for_each_line(content, [&](std::size_t number, std::string_view line) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(number, std::string("invalid JSON: ") + e.what());
    }
    fn(number, j);
  });
}

}  // namespace dict2wic::io
