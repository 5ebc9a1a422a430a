#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "kwnet/errors.hpp"
#include "kwnet/wos.hpp"

namespace kwnet {

namespace {

// Offset of the first malformed UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len;
    unsigned char lo = 0x80, hi = 0xBF;
    if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      if (c == 0xE0) lo = 0xA0;  // overlong
      if (c == 0xED) hi = 0x9F;  // surrogates
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      if (c == 0xF0) lo = 0x90;
      if (c == 0xF4) hi = 0x8F;  // above U+10FFFF
    } else {
      return i;
    }
    if (i + len > n) return i;
    if (p[i + 1] < lo || p[i + 1] > hi) return i;
    for (std::size_t k = 2; k < len; ++k)
      if (p[i + k] < 0x80 || p[i + k] > 0xBF) return i;
    i += len;
  }
  return std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto end = value.find(';', start);
    if (end == std::string_view::npos) end = value.size();
    const auto item = trim(value.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

bool is_tag_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

const std::set<std::string, std::less<>> kRecognized{"FN", "VR", "PT", "AU", "TI", "SO", "DE", "ID",
                                                     "PY", "DT", "WC", "SC", "UT", "ER", "EF"};
const std::set<std::string, std::less<>> kListTags{"DE", "ID", "WC", "SC"};

std::size_t line_of_offset(std::string_view s, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < s.size(); ++i)
    if (s[i] == '\n') ++line;
  return line;
}

class ExportParser {
 public:
  ExportParser(std::string_view bytes, std::string_view source) : bytes_(bytes), source_(source) {}

  ParseResult run() {
    if (bytes_.starts_with("\xEF\xBB\xBF")) bytes_.remove_prefix(3);
    if (const auto bad = find_invalid_utf8(bytes_); bad != std::string_view::npos) {
      throw ParseError(source_, line_of_offset(bytes_, bad),
                       "undecodable input: invalid UTF-8 sequence at byte offset " + std::to_string(bad));
    }

    std::size_t pos = 0;
    while (pos < bytes_.size()) {
      auto end = bytes_.find('\n', pos);
      if (end == std::string_view::npos) end = bytes_.size();
      std::string_view line = bytes_.substr(pos, end - pos);
      if (line.ends_with('\r')) line.remove_suffix(1);
      ++line_no_;
      handle_line(line);
      pos = end + 1;
    }
    if (in_record_) {
      throw ParseError(source_, record_line_,
                       "record has no ER terminator before end of input");
    }
    return std::move(result_);
  }

 private:
  void warn(std::size_t line, const std::string& what) {
    result_.warnings.push_back(std::string(source_) + ":" + std::to_string(line) + ": " + what);
  }

  void handle_line(std::string_view line) {
    if (trim(line).empty()) {
      current_ = nullptr;
      return;
    }
    if (line.size() > 3 && line.starts_with("   ") && line[3] != ' ') {
      if (current_ == nullptr) {
        warn(line_no_, "continuation line outside a field ignored");
        return;
      }
      const auto value = trim(line.substr(3));
      if (!value.empty()) {
        if (!current_->empty()) *current_ += ' ';
        *current_ += value;
      }
      return;
    }
    if (line.size() >= 2 && is_tag_char(line[0]) && is_tag_char(line[1]) && (line.size() == 2 || line[2] == ' ')) {
      handle_tag(std::string(line.substr(0, 2)), line.size() > 3 ? trim(line.substr(3)) : std::string_view{});
      return;
    }
    warn(line_no_, "unrecognized line ignored");
    current_ = nullptr;
  }

  void handle_tag(const std::string& tag, std::string_view value) {
    current_ = nullptr;
    if (tag == "ER") {
      if (!in_record_) {
        warn(line_no_, "ER outside a record ignored");
        return;
      }
      finish_record();
      return;
    }
    if (tag == "EF") {
      if (in_record_) throw ParseError(source_, record_line_, "record has no ER terminator before EF");
      return;
    }
    if (tag == "FN" || tag == "VR") {
      if (in_record_) warn(line_no_, "header tag " + tag + " inside a record ignored");
      return;
    }
    if (!in_record_) {
      in_record_ = true;
      record_line_ = line_no_;
      fields_.clear();
    }
    if (!kRecognized.contains(tag)) {
      if (unknown_tags_.insert(tag).second) warn(line_no_, "unknown tag " + tag + " ignored");
      scratch_.clear();
      current_ = &scratch_;
      return;
    }
    auto [it, inserted] = fields_.try_emplace(tag, std::string(value));
    if (!inserted) {
      if (kListTags.contains(tag)) {
        it->second += ';';
        it->second += value;
      } else {
        warn(line_no_, "repeated tag " + tag + " ignored");
        scratch_.clear();
        current_ = &scratch_;
        return;
      }
    }
    current_ = &it->second;
  }

  std::string field(const char* tag) const {
    const auto it = fields_.find(tag);
    return it == fields_.end() ? std::string{} : std::string(trim(it->second));
  }

  void finish_record() {
    ++ordinal_;
    ArticleRecord r;
    r.id = field("UT");
    if (r.id.empty()) {
      r.id = "gen:" + std::string(source_) + ":" + std::to_string(ordinal_);
      warn(record_line_, "record without UT; assigned id " + r.id);
    }
    r.title = field("TI");
    r.source = field("SO");
    r.doc_type = field("DT");
    if (const auto py = field("PY"); !py.empty()) {
      int year = 0;
      bool digits = py.size() <= 4;
      for (char c : py) {
        if (c < '0' || c > '9') digits = false;
        else year = year * 10 + (c - '0');
      }
      if (digits && year >= kMinYear && year <= kMaxYear) r.pub_year = year;
      else warn(record_line_, "unusable PY '" + py + "'; year treated as unknown");
    }
    r.author_keywords = split_list(field("DE"));
    r.keywords_plus = split_list(field("ID"));
    r.research_areas = split_list(field("SC"));
    r.wos_categories = split_list(field("WC"));
    result_.records.push_back(std::move(r));
    in_record_ = false;
    fields_.clear();
  }

  std::string_view bytes_;
  std::string_view source_;
  ParseResult result_;
  std::map<std::string, std::string> fields_;
  std::set<std::string> unknown_tags_;
  std::string scratch_;
  std::string* current_ = nullptr;
  bool in_record_ = false;
  std::size_t line_no_ = 0;
  std::size_t record_line_ = 0;
  std::size_t ordinal_ = 0;
};

}  // namespace

ParseResult parse_export(std::string_view bytes, std::string_view source_name) {
  return ExportParser(bytes, source_name).run();
}

Corpus assemble_corpus(std::span<const ParseResult> parts, std::span<const std::string> source_names,
                       std::vector<std::string>* warnings) {
  Corpus corpus;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i < source_names.size()) corpus.provenance.push_back(source_names[i]);
    for (const auto& w : parts[i].warnings)
      if (warnings) warnings->push_back(w);
    for (const auto& r : parts[i].records) {
      if (!seen.insert(r.id).second) {
        if (warnings) warnings->push_back("duplicate record id " + r.id + " dropped");
        continue;
      }
      corpus.records.push_back(r);
    }
  }
  return corpus;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError("cannot read " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InputError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot replace " + path.string());
  }
}

namespace {

bool looks_like_json(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string_view::npos && text[first] == '{';
}

}  // namespace

Corpus load_corpus(std::span<const std::filesystem::path> paths, std::vector<std::string>* warnings) {
  struct Loaded {
    ParseResult parsed;
    std::vector<std::string> provenance;
    std::string period;
  };
  std::vector<std::future<Loaded>> jobs;
  jobs.reserve(paths.size());
  for (const auto& path : paths) {
    jobs.push_back(std::async(std::launch::async, [path] {
      Loaded loaded;
      const std::string text = read_file(path);
      if (looks_like_json(text)) {
        Corpus c = deserialize_corpus(text);
        loaded.parsed.records = std::move(c.records);
        loaded.provenance = std::move(c.provenance);
        loaded.period = std::move(c.period);
      } else {
        loaded.parsed = parse_export(text, path.string());
        loaded.provenance = {path.string()};
      }
      return loaded;
    }));
  }

  std::vector<Loaded> loaded;
  loaded.reserve(jobs.size());
  for (auto& job : jobs) loaded.push_back(job.get());

  std::vector<ParseResult> parts;
  for (auto& l : loaded) parts.push_back(std::move(l.parsed));
  Corpus corpus = assemble_corpus(parts, {}, warnings);
  for (const auto& l : loaded) corpus.provenance.insert(corpus.provenance.end(), l.provenance.begin(), l.provenance.end());
  if (loaded.size() == 1) corpus.period = loaded.front().period;
  return corpus;
}

}  // namespace kwnet
